"""Monotone success formulas built from data flows, minimized to CNF and evaluated."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvariantError, UnsatisfiableRequirementError
from .paths import PathSet

OS = "OS"
FS = "FS"

SELF_CHECK_MAX_VARS = 24

Clause = frozenset[str]


def clause_key(c: Iterable[str]) -> tuple[int, tuple[str, ...]]:
    s = tuple(sorted(c))
    return len(s), s


def absorb(sets: Iterable[Clause]) -> tuple[Clause, ...]:
    """Drop duplicates and every set that is a superset of another."""
    kept: list[Clause] = []
    for c in sorted(set(sets), key=clause_key):
        if not any(k <= c for k in kept):
            kept.append(c)
    return tuple(kept)


@dataclass(frozen=True)
class MonotoneFormula:
    """Negation-free formula over component literals.

    ``form`` is ``"dnf"`` (``terms`` are conjunctions, i.e. path sets), ``"cnf"``
    (``terms`` are clauses) or ``"and"`` (conjunction of ``parts``). A CNF
    with no clauses is the constant true.
    """

    form: str
    terms: tuple[Clause, ...] = ()
    layer: int = 0
    parts: tuple[MonotoneFormula, ...] = ()

    def __post_init__(self):
        if self.form not in ("dnf", "cnf", "and"):
            raise ValueError(f"unknown form {self.form!r}")
        if any(not t for t in self.terms):
            raise ValueError("empty clause or term")

    @property
    def variables(self) -> frozenset[str]:
        out = frozenset().union(*self.terms) if self.terms else frozenset()
        for part in self.parts:
            out |= part.variables
        return out

    @property
    def clauses(self) -> tuple[Clause, ...]:
        if self.form != "cnf":
            raise ValueError("formula is not in clause form")
        return self.terms

    @property
    def is_true(self) -> bool:
        return self.form == "cnf" and not self.terms


def cnf(clauses: Iterable[Iterable[str]], layer: int = 0) -> MonotoneFormula:
    return MonotoneFormula("cnf", absorb(frozenset(c) for c in clauses), layer)


def dnf(terms: Iterable[Iterable[str]], layer: int = 0) -> MonotoneFormula:
    return MonotoneFormula("dnf", tuple(sorted({frozenset(t) for t in terms}, key=clause_key)), layer)


def build_success_dnf(flows: Mapping[tuple[str, int], PathSet], n: int) -> MonotoneFormula:
    """Conjunction over subsystems of the disjunction of their path sets on layer ``n``.

    A subsystem is one (source, destination) pair on the requirement's own
    layer; its flows on lower layers are alternatives. Subsystems whose
    endpoints coincide after projection impose nothing.
    """
    parts = []
    for (req, layer), pathset in sorted(flows.items()):
        if layer != n:
            continue
        for anchor, paths in pathset.subsystems().items():
            if not paths:
                raise UnsatisfiableRequirementError(
                    f"requirement {req!r} ({anchor[0]} -> {anchor[1]}) unsatisfiable on layer {n}")
            parts.append(dnf(paths, n))
    return MonotoneFormula("and", layer=n, parts=tuple(parts))


def _dnf_to_clauses(terms: Sequence[Clause]) -> tuple[Clause, ...]:
    # minimal transversals of the terms, absorbing after every distribution step
    clauses: tuple[Clause, ...] = (frozenset(),)
    for term in terms:
        nxt = []
        for c in clauses:
            if c & term:
                nxt.append(c)
            else:
                nxt.extend(c | {v} for v in term)
        clauses = absorb(nxt)
    return clauses


def _clauses(f: MonotoneFormula) -> tuple[Clause, ...]:
    if f.form == "cnf":
        return absorb(f.terms)
    if f.form == "dnf":
        return _dnf_to_clauses(f.terms)
    return absorb(c for part in f.parts for c in _clauses(part))


def to_minimal_cnf(f: MonotoneFormula, self_check: bool = False) -> MonotoneFormula:
    """Equivalent CNF whose clauses are exactly the prime implicates of ``f``.

    With ``self_check`` the result is compared with ``f`` on every assignment
    (skipped with a warning above 24 variables).
    """
    out = MonotoneFormula("cnf", _clauses(f), f.layer)
    if self_check:
        variables = sorted(f.variables)
        if len(variables) > SELF_CHECK_MAX_VARS:
            warnings.warn(f"{len(variables)} variables: exhaustive equivalence check skipped", stacklevel=2)
        elif not _equivalent(f, out, variables):
            raise InvariantError("minimal CNF is not equivalent to its source formula")
    return out


def eliminate_access_points(f: MonotoneFormula, access_points: Iterable[str]) -> MonotoneFormula:
    """Treat access points as always operational: every clause containing one is satisfied."""
    aps = frozenset(access_points)
    return MonotoneFormula("cnf", absorb(c for c in f.clauses if not c & aps), f.layer)


def _holds(f: MonotoneFormula, up: Mapping[str, bool]) -> bool:
    if f.form == "cnf":
        return all(any(up[v] for v in c) for c in f.terms)
    if f.form == "dnf":
        return any(all(up[v] for v in t) for t in f.terms)
    return all(_holds(p, up) for p in f.parts)


def evaluate(f: MonotoneFormula, assignment: Mapping[str, str]) -> str:
    missing = f.variables - set(assignment)
    if missing:
        raise KeyError(f"assignment misses {sorted(missing)}")
    up = {v: s == OS for v, s in assignment.items()}
    return OS if _holds(f, up) else FS


def failure_assignment(f: MonotoneFormula, failed: Iterable[str]) -> dict[str, str]:
    failed = set(failed)
    return {v: FS if v in failed else OS for v in f.variables}


def evaluate_batch(f: MonotoneFormula, order: Sequence[str], up: np.ndarray) -> np.ndarray:
    """Vectorized evaluation; ``up`` is a boolean (rows, len(order)) matrix."""
    col = {v: i for i, v in enumerate(order)}
    if f.form == "and":
        out = np.ones(up.shape[0], dtype=bool)
        for part in f.parts:
            out &= evaluate_batch(part, order, up)
        return out
    if f.form == "cnf":
        out = np.ones(up.shape[0], dtype=bool)
        for c in f.terms:
            out &= up[:, [col[v] for v in sorted(c)]].any(axis=1)
        return out
    out = np.zeros(up.shape[0], dtype=bool)
    for t in f.terms:
        out |= up[:, [col[v] for v in sorted(t)]].all(axis=1)
    return out


def state_matrix(m: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop`` of the OS-first truth table over ``m`` variables.

    Row 0 is all-operational; the last variable toggles fastest.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1) == 0


def _equivalent(f: MonotoneFormula, g: MonotoneFormula, order: Sequence[str], chunk: int = 1 << 16) -> bool:
    total = 1 << len(order)
    for start in range(0, total, chunk):
        up = state_matrix(len(order), start, min(total, start + chunk))
        if not np.array_equal(evaluate_batch(f, order, up), evaluate_batch(g, order, up)):
            return False
    return True


def render(f: MonotoneFormula, ascii: bool = False) -> str:
    """Infix rendering, e.g. ``(Switch_1 ∨ Switch_2) ∧ (Server_1 ∨ Server_2)``."""
    and_, or_ = (" & ", " | ") if ascii else (" ∧ ", " ∨ ")
    if f.form == "and":
        if not f.parts:
            return "true"
        return and_.join(f"({render(p, ascii)})" if len(f.parts) > 1 else render(p, ascii) for p in f.parts)
    if not f.terms:
        return "true" if f.form == "cnf" else "false"
    inner, outer = (or_, and_) if f.form == "cnf" else (and_, or_)
    groups = [sorted(t) for t in sorted(f.terms, key=clause_key)]
    return outer.join(
        inner.join(g) if len(g) == 1 or len(groups) == 1 else f"({inner.join(g)})" for g in groups
    )
