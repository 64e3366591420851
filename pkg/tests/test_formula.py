import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layerdep import FS, OS, build_success_dnf, coverage_flows, eliminate_access_points, evaluate, to_minimal_cnf
from layerdep.errors import UnsatisfiableRequirementError
from layerdep.formula import MonotoneFormula, cnf, dnf, failure_assignment, render
from layerdep.paths import EndpointPair, PathSet


def sat_dnf(terms, up):
    return any(all(up[v] for v in t) for t in terms)


def sat_cnf(clauses, up):
    return all(any(up[v] for v in c) for c in clauses)


def truth_vectors(variables):
    for bits in itertools.product([True, False], repeat=len(variables)):
        yield dict(zip(variables, bits))


def same_function(dnf_terms, clauses):
    variables = sorted(set().union(*dnf_terms, *clauses))
    return all(sat_dnf(dnf_terms, up) == sat_cnf(clauses, up) for up in truth_vectors(variables))


def clause_set(f):
    return {frozenset(c) for c in f.clauses}


def flows_of(*paths):
    pair = EndpointPair(1, "s", "t", "r", ("s", "t"))
    return {("r", 1): PathSet(1, "r", ((pair, tuple(paths)),))}


def test_service_layer_success_tree(casestudy):
    f = build_success_dnf(coverage_flows(casestudy), 3)
    expected = [{"WEB_Client_1", "WEB_Server_1"}, {"WEB_Client_2", "WEB_Server_1"},
                {"WEB_Client_1", "DNS_Server_1"}, {"WEB_Client_2", "DNS_Server_1"}]
    # the stated conjunction, checked against the built formula on all 16 assignments
    for up in truth_vectors(sorted(f.variables)):
        assert (evaluate(f, {v: OS if s else FS for v, s in up.items()}) == OS) == all(
            all(up[v] for v in t) for t in expected)


def test_single_path():
    f = to_minimal_cnf(build_success_dnf(flows_of(("s", "t")), 1))
    assert clause_set(f) == {frozenset("s"), frozenset("t")}


def test_parallel_paths():
    f = to_minimal_cnf(build_success_dnf(flows_of(("s", "a", "t"), ("s", "b", "t")), 1))
    assert clause_set(f) == {frozenset("s"), frozenset("t"), frozenset("ab")}
    assert same_function([set("sat"), set("sbt")], f.clauses)


def test_unsatisfiable_subsystem():
    with pytest.raises(UnsatisfiableRequirementError):
        build_success_dnf(flows_of(), 1)


def test_physical_cnf_before_elimination(bundle):
    assert clause_set(bundle.reduced[1]) == {
        frozenset({"WS_1"}), frozenset({"WS_2"}),
        frozenset({"Switch_1", "Switch_2"}), frozenset({"Server_1", "Server_2"}),
    }


def test_factoring():
    assert clause_set(to_minimal_cnf(dnf([("a", "b"), ("a", "c")]))) == {frozenset("a"), frozenset("bc")}


def test_distribution():
    f = to_minimal_cnf(dnf([("a", "b"), ("c", "d")]), self_check=True)
    assert clause_set(f) == {frozenset(x) for x in ("ac", "ad", "bc", "bd")}
    assert same_function([set("ab"), set("cd")], f.clauses)


def test_clause_order_is_size_then_lexicographic():
    f = to_minimal_cnf(dnf([("z", "b"), ("z", "a", "c"), ("y",)]))
    assert [tuple(sorted(c)) for c in f.clauses] == [("y", "z"), ("a", "b", "y"), ("b", "c", "y")]


def test_self_check_skips_large_formulas():
    big = dnf([tuple(f"x{i}" for i in range(25))])
    with pytest.warns(UserWarning, match="skipped"):
        to_minimal_cnf(big, self_check=True)


def test_eliminate_physical(bundle):
    assert clause_set(eliminate_access_points(bundle.reduced[1], {"WS_1", "WS_2"})) == {
        frozenset({"Switch_1", "Switch_2"}), frozenset({"Server_1", "Server_2"})}


def test_eliminate_logical(bundle):
    assert clause_set(eliminate_access_points(bundle.reduced[2], {"VWS_1", "VWS_2"})) == {
        frozenset({"VLAN_1"}), frozenset({"VServer_1"}), frozenset({"VServer_2"})}


def test_eliminate_everything():
    f = cnf([("a", "b"), ("c",)])
    out = eliminate_access_points(f, f.variables)
    assert out.is_true and out.variables == frozenset()


def test_eliminate_nothing_is_identity(bundle):
    for f in bundle.reduced.values():
        assert eliminate_access_points(f, set()) == f


PHYSICAL = cnf([("Switch_1", "Switch_2"), ("Server_1", "Server_2")], 1)


def test_evaluate_all_operational():
    assert evaluate(PHYSICAL, failure_assignment(PHYSICAL, [])) == OS


def test_evaluate_both_switches_failed():
    assert evaluate(PHYSICAL, failure_assignment(PHYSICAL, ["Switch_1", "Switch_2"])) == FS


def test_evaluate_all_failed():
    assert evaluate(PHYSICAL, failure_assignment(PHYSICAL, PHYSICAL.variables)) == FS


def test_evaluate_missing_variable():
    with pytest.raises(KeyError):
        evaluate(PHYSICAL, {"Switch_1": OS})


def test_render():
    assert render(PHYSICAL) == "(Server_1 ∨ Server_2) ∧ (Switch_1 ∨ Switch_2)"
    assert render(PHYSICAL, ascii=True) == "(Server_1 | Server_2) & (Switch_1 | Switch_2)"
    assert render(cnf([("b",), ("a",)])) == "a ∧ b"
    assert render(cnf([])) == "true"


def test_rejects_empty_clause():
    with pytest.raises(ValueError):
        MonotoneFormula("cnf", (frozenset(),))


VARS = [f"x{i}" for i in range(8)]
terms_st = st.lists(st.sets(st.sampled_from(VARS), min_size=1, max_size=4), min_size=1, max_size=5)
nested_st = st.lists(terms_st, min_size=1, max_size=3)


def nested(parts):
    return MonotoneFormula("and", parts=tuple(dnf(p) for p in parts))


@settings(max_examples=200, deadline=None)
@given(nested_st)
def test_minimal_cnf_equivalent(parts):
    f = to_minimal_cnf(nested(parts))
    variables = sorted(set().union(*(t for p in parts for t in p)))
    for up in truth_vectors(variables):
        assert all(sat_dnf(p, up) for p in parts) == sat_cnf(f.clauses, up)


@settings(max_examples=200, deadline=None)
@given(nested_st)
def test_minimal_cnf_is_irredundant_and_prime(parts):
    f = to_minimal_cnf(nested(parts))
    variables = sorted(f.variables)
    for i, c in enumerate(f.clauses):
        rest = f.clauses[:i] + f.clauses[i + 1:]
        assert not all(sat_cnf(rest, up) == sat_cnf(f.clauses, up) for up in truth_vectors(variables))
        # each clause is a minimal cut: failing exactly it breaks, restoring any member repairs
        up = {v: v not in c for v in variables}
        assert not sat_cnf(f.clauses, up)
        for v in c:
            assert sat_cnf(f.clauses, up | {v: True})
    for a, b in itertools.permutations(f.clauses, 2):
        assert not a <= b


@settings(max_examples=100, deadline=None)
@given(nested_st, st.data())
def test_monotone(parts, data):
    f = to_minimal_cnf(nested(parts))
    variables = sorted(f.variables)
    failed = data.draw(st.sets(st.sampled_from(variables)))
    if not failed:
        return
    v = data.draw(st.sampled_from(sorted(failed)))
    before = evaluate(f, failure_assignment(f, failed))
    after = evaluate(f, failure_assignment(f, failed - {v}))
    assert not (before == OS and after == FS)
