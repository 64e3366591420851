"""Combinatorial reliability of a layer's minimal CNF.

All quantities assume independent components. Probabilities are per component;
components absent from the probability map are taken as perfectly reliable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dependability import DependabilityProfile, RecoveryGroup
from .errors import InvariantError, VariableCapError
from .formula import FS, OS, MonotoneFormula, cnf as make_cnf, evaluate_batch, state_matrix

TRUTH_TABLE_CAP = 24
ROW_EMISSION_THRESHOLD = 12
_CHUNK = 1 << 16


@dataclass(frozen=True)
class TruthTableRow:
    assignment: Mapping[str, str]
    status: str
    probability: float


@dataclass(frozen=True)
class CombinationCounts:
    universal: int
    per_group: int
    single: int | None
    double: int | None


@dataclass(frozen=True)
class ReliabilityReport:
    layer: int
    variables: tuple[str, ...]
    exact: float | None
    closed_form: float | None
    limited: Mapping[int, float]
    deviation: Mapping[int, float]
    counts: CombinationCounts
    rows: tuple[TruthTableRow, ...] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def m(self) -> int:
        return len(self.variables)


def _p(probs: Mapping[str, float], v: str) -> float:
    return float(probs.get(v, 1.0))


def _check_cap(m: int, cap: int) -> None:
    if m > cap:
        raise VariableCapError(f"{m} variables exceed the truth-table cap of {cap}; "
                               "use closed-form or limited-coverage modes")


def _chunks(f: MonotoneFormula, probs: Mapping[str, float], cap: int):
    order = sorted(f.variables)
    _check_cap(len(order), cap)
    p = np.array([_p(probs, v) for v in order])
    total = 1 << len(order)
    for start in range(0, total, _CHUNK):
        up = state_matrix(len(order), start, min(total, start + _CHUNK))
        prob = np.where(up, p, 1.0 - p).prod(axis=1)
        yield order, up, evaluate_batch(f, order, up), prob


def truth_table(f: MonotoneFormula, probs: Mapping[str, float], cap: int = TRUTH_TABLE_CAP) -> list[TruthTableRow]:
    """Every assignment of the formula's variables, all-operational row first.

    Variables are ordered lexicographically and the last one toggles fastest.
    """
    rows = []
    for order, up, status, prob in _chunks(f, probs, cap):
        for bits, ok, pr in zip(up, status, prob):
            rows.append(TruthTableRow(
                {v: OS if b else FS for v, b in zip(order, bits)},
                OS if ok else FS,
                float(pr),
            ))
    return rows


def total_probability(f: MonotoneFormula, probs: Mapping[str, float], cap: int = TRUTH_TABLE_CAP) -> float:
    return math.fsum(x for *_, prob in _chunks(f, probs, cap) for x in prob)


def exact_reliability(f: MonotoneFormula, probs: Mapping[str, float], cap: int = TRUTH_TABLE_CAP) -> float:
    return math.fsum(x for _, _, status, prob in _chunks(f, probs, cap) for x in prob[status])


def _k_out_of_r(members: Sequence[str], k: int, probs: Mapping[str, float]) -> float:
    # sum over j = 0..r-k failed members of every j-subset's probability
    total = []
    for j in range(len(members) - k + 1):
        for failed in itertools.combinations(members, j):
            total.append(math.prod(1.0 - _p(probs, v) if v in failed else _p(probs, v) for v in members))
    return math.fsum(total)


def closed_form_reliability(groups: Iterable[RecoveryGroup], probs: Mapping[str, float],
                            spof: Iterable[str] = ()) -> float | None:
    """Product of k-out-of-r group reliabilities (and SPOF reliabilities).

    Returns None when groups share members, since the product then no longer
    describes independent blocks.
    """
    groups = list(groups)
    spof = sorted(spof)
    seen: set[str] = set(spof)
    for g in groups:
        if seen & g.members:
            return None
        seen |= g.members
    out = math.prod(_p(probs, v) for v in spof)
    for g in groups:
        out *= _k_out_of_r(sorted(g.members), g.quorum, probs)
    return out


def limited_coverage(f: MonotoneFormula, probs: Mapping[str, float], k: int) -> float:
    """Probability of operational states with at most ``k`` failed components."""
    if k < 0:
        raise ValueError("k must be non-negative")
    order = sorted(f.variables)
    terms = []
    for j in range(min(k, len(order)) + 1):
        for failed in itertools.combinations(order, j):
            up = np.ones((1, len(order)), dtype=bool)
            up[0, [order.index(v) for v in failed]] = False
            if evaluate_batch(f, order, up)[0]:
                terms.append(math.prod(1.0 - _p(probs, v) if v in failed else _p(probs, v) for v in order))
    return math.fsum(terms)


def deviation(r: float, r_limited: float, tol: float = 1e-12) -> float:
    """Relative shortfall of a limited-coverage estimate, in percent."""
    if not 0.0 < r <= 1.0 + tol:
        raise ValueError(f"reliability {r} outside (0, 1]")
    if r_limited > r + tol:
        raise InvariantError(f"limited-coverage estimate {r_limited} exceeds reliability {r}")
    return max(0.0, (r - r_limited) / r * 100.0)


def combination_counts(groups: Iterable[RecoveryGroup | int], m: int) -> CombinationCounts:
    sizes = [g if isinstance(g, int) else g.size for g in groups]
    return CombinationCounts(
        universal=2 ** m,
        per_group=math.prod(2 ** r - 1 for r in sizes) - 1,
        single=m if m >= 2 else None,
        double=m * (m + 1) // 2 if m >= 3 else None,
    )


def identical_groups(l: int, r: int, k: int = 1) -> list[RecoveryGroup]:
    width = len(str(max(l, r)))
    return [RecoveryGroup(1, frozenset(f"g{i:0{width}d}_{j:0{width}d}" for j in range(r)), k) for i in range(l)]


def deviation_curve(l: int, r: int, p_from: float, p_to: float, step: float) -> list[tuple[float, float]]:
    """Deviation of single-failure coverage for ``l`` disjoint 1-out-of-``r`` groups of identical units."""
    if step <= 0:
        raise ValueError("step must be positive")
    if l < 1 or r < 2 or not 0.0 < p_from < p_to < 1.0:
        raise ValueError("need l >= 1, r >= 2 and 0 < p_from < p_to < 1")
    groups = identical_groups(l, r)
    f = make_cnf(g.members for g in groups)
    out = []
    for i in range(int(math.floor((p_to - p_from) / step + 1e-9)) + 1):
        p = round(p_from + i * step, 12)
        probs = dict.fromkeys(f.variables, p)
        out.append((p, deviation(closed_form_reliability(groups, probs), limited_coverage(f, probs, 1))))
    return out


def reliability_report(f: MonotoneFormula, profile: DependabilityProfile, probs: Mapping[str, float],
                       row_threshold: int = ROW_EMISSION_THRESHOLD,
                       cap: int = TRUTH_TABLE_CAP) -> ReliabilityReport:
    variables = tuple(sorted(f.variables))
    m = len(variables)
    notes = []
    closed = closed_form_reliability(profile.groups, probs, profile.spof)
    if any(g.quorum > 1 for g in profile.groups):
        notes.append("quorum groups present: the truth table follows topology (1-out-of-r), "
                     "the closed form applies the quorum")
    exact = None
    rows = None
    if m <= cap:
        exact = exact_reliability(f, probs, cap)
        total = total_probability(f, probs, cap)
        if abs(total - 1.0) > 1e-9:
            raise InvariantError(f"truth-table probabilities sum to {total!r}")
        if m <= row_threshold:
            rows = tuple(truth_table(f, probs, cap))
    else:
        notes.append(f"{m} variables exceed the truth-table cap; exact value unavailable")
    limited = {k: limited_coverage(f, probs, k) for k in (1, 2)}
    reference = exact if exact is not None else closed
    dev = {}
    if reference is not None and reference > 0:
        if not limited[1] <= limited[2] + 1e-15 or limited[2] > reference + 1e-12:
            raise InvariantError("limited-coverage estimates are not ordered below the reliability")
        dev = {k: deviation(reference, v) for k, v in limited.items()}
    return ReliabilityReport(
        layer=f.layer,
        variables=variables,
        exact=exact,
        closed_form=closed,
        limited=limited,
        deviation=dev,
        counts=combination_counts(profile.groups + tuple(1 for _ in profile.spof), m),
        rows=rows,
        notes=tuple(notes),
    )
