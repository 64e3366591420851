import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from layerdep import (
    OS,
    dependability_profile,
    evaluate,
    generate_double_fault_plan,
    generate_single_fault_plan,
    parse_model,
    plan_size_bounds,
    run_pipeline,
)
from layerdep.formula import cnf, failure_assignment
from layerdep.testplan import INJECT, REPAIR, SENSING, SWITCHING

from conftest import model_doc

SW = ("Switch_1", "Switch_2")
SRV = ("Server_1", "Server_2")


def target_sets(plan, kind=INJECT):
    return [t.targets for t in plan.templates if t.kind == kind]


def single_layer(clauses):
    f = cnf(clauses, 1)
    return {1: dependability_profile(f)}, {1: f}


def test_casestudy_single_fault(bundle):
    plan = generate_single_fault_plan(bundle.profiles, bundle.cnfs)
    assert plan.total == 8
    assert sorted(target_sets(plan)) == [(v,) for v in sorted(SW + SRV)]
    assert plan.counts == {1: 8, 2: 0, 3: 0}
    assert {t.layer for t in plan.templates} == {1}


def test_template_shape(bundle):
    inject, repair = generate_single_fault_plan(bundle.profiles, bundle.cnfs).templates[:2]
    assert (inject.id, repair.id) == ("L1-INJ-Server_1", "L1-REP-Server_1")
    assert [s.phase for s in inject.steps] == [SENSING, SWITCHING]
    assert not any(s.conditional for s in inject.steps)
    assert all(s.conditional for s in repair.steps)
    assert repair.expected_state == OS


def test_spof_note(bundle):
    plan = generate_single_fault_plan(bundle.profiles, bundle.cnfs)
    assert any("DNS_Server_1" in n and "disaster-recovery" in n for n in plan.notes)


def test_empty_plan():
    plan = generate_single_fault_plan(*single_layer([("a",), ("b",)]))
    assert plan.total == 0
    assert "no recovery groups; see SPOF disaster-recovery list" in plan.notes
    assert any(n.startswith("SPOFs require disaster-recovery plans") for n in plan.notes)


def test_three_member_group():
    assert generate_single_fault_plan(*single_layer(["abc"])).total == 6


def test_casestudy_double_fault(bundle):
    plan = generate_double_fault_plan(bundle.profiles, bundle.cnfs)
    assert plan.total == 16
    pairs = {t for t in target_sets(plan) if len(t) == 2}
    assert pairs == {tuple(sorted((a, b))) for a in SW for b in SRV}
    assert sorted(t for _, t in plan.excluded) == [SRV, SW]


def test_two_tolerant_double_fault():
    plan = generate_double_fault_plan(*single_layer(["abc"]))
    assert plan.total == 12 and plan.excluded == ()


def test_double_fault_empty():
    assert generate_double_fault_plan(*single_layer([("a",)])).total == 0


def test_unmet_tolerance_note(bundle):
    plan = generate_double_fault_plan(bundle.profiles, bundle.cnfs)
    assert any(n.startswith("layer 1: requested tolerance 2 unmet") for n in plan.notes)


def test_bounds(casestudy, bundle):
    b = plan_size_bounds(casestudy, bundle.profiles)
    layer = {lb.layer: lb for lb in b.layers}
    assert (layer[1].templates_from_groups, layer[1].templates_from_components) == (8, 8)
    assert (layer[2].templates_from_groups, layer[3].templates_from_groups) == (0, 0)
    assert (layer[2].templates_from_components, layer[3].templates_from_components) == (0, 0)
    assert (b.total, b.upper_single, b.upper_double) == (8, 24, 100)
    assert b.discrepancies == ()


def test_bounds_two_component_layer():
    m = parse_model(model_doc({1: (["a", "b"], [("a", "b")], []), 2: (["X"], [], [])},
                              projections=[(2, {"X": ["a", "b"]})]))
    b = plan_size_bounds(m, {1: dependability_profile(cnf(["ab"], 1))})
    assert b.total == 4 and b.layers[0].templates_from_components == 4


def test_bounds_flag_component_off_every_flow():
    # a leaf vertex on no route is neither SPOF nor group member
    m = parse_model(model_doc({1: (["a", "b", "s", "t", "z"], [("s", "a"), ("s", "b"), ("a", "t"),
                                                                 ("b", "t"), ("t", "z")], []),
                               2: (["X"], [], [])},
                              projections=[(2, {"X": ["s"]})], requirements=[("r", 1, "s", "t")]))
    b = run_pipeline(m).plan.bounds
    assert 1 in b.discrepancies
    assert (b.layers[0].templates_from_groups, b.layers[0].templates_from_components) == (4, 6)


def test_determinism(casestudy):
    a, b = run_pipeline(casestudy), run_pipeline(casestudy)
    assert a.plan == b.plan


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.sampled_from("abcdefg"), min_size=1, max_size=4), min_size=1, max_size=4),
       st.sampled_from([1, 2]))
def test_pairing_and_survivability(clauses, tolerance):
    profiles, cnfs = single_layer(clauses)
    gen = generate_single_fault_plan if tolerance == 1 else generate_double_fault_plan
    plan = gen(profiles, cnfs)
    f = cnfs[1]
    members = profiles[1].recovery_members
    for inject, repair in zip(plan.templates[::2], plan.templates[1::2]):
        assert (inject.kind, repair.kind) == (INJECT, REPAIR)
        assert inject.targets == repair.targets
        assert set(inject.targets) <= members
        assert not set(inject.targets) & profiles[1].spof
        assert evaluate(f, failure_assignment(f, inject.targets)) == OS
    assert plan.total == 2 * len(set(target_sets(plan)))
    assert plan.total <= 2 * len(members) * (len(members) + 1) // 2
    # every survivable candidate was emitted
    candidates = [(v,) for v in sorted(members)]
    if tolerance == 2:
        candidates += list(itertools.combinations(sorted(members), 2))
    survivable = [c for c in candidates if evaluate(f, failure_assignment(f, c)) == OS]
    assert target_sets(plan) == survivable
