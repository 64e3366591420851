"""What a layer's minimal CNF says about which failures it survives."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .formula import MonotoneFormula, clause_key
from .model import Graph, LayeredModel, layer_graph
from .paths import project_endpoints, terminal_components

UNCONSTRAINED = math.inf


@dataclass(frozen=True)
class RecoveryGroup:
    layer: int
    members: frozenset[str]
    quorum: int = 1

    @property
    def size(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return f"{self.quorum}-of-{self.size} {{{', '.join(sorted(self.members))}}}"


@dataclass(frozen=True)
class DependabilityProfile:
    layer: int
    spof: frozenset[str]
    groups: tuple[RecoveryGroup, ...]
    tolerance: int | float
    access_points_removed: frozenset[str] = frozenset()
    clause_count: int = 0

    @property
    def recovery_members(self) -> frozenset[str]:
        return frozenset().union(*(g.members for g in self.groups)) if self.groups else frozenset()

    @property
    def min_clause_size(self) -> int | None:
        sizes = [1] * len(self.spof) + [g.size for g in self.groups]
        return min(sizes) if sizes else None

    def meets(self, requested: int) -> bool:
        """Whether ``requested`` simultaneous failures are tolerated with at least that many clauses."""
        return self.tolerance >= requested and (self.clause_count == 0 or self.clause_count >= requested)


def extract_spof(cnf: MonotoneFormula) -> frozenset[str]:
    return frozenset(v for c in cnf.clauses if len(c) == 1 for v in c)


def extract_recovery_groups(cnf: MonotoneFormula,
                            quorum_overrides: Mapping[frozenset[str], int] | None = None) -> list[RecoveryGroup]:
    overrides = quorum_overrides or {}
    groups = []
    for c in sorted(cnf.clauses, key=clause_key):
        if len(c) < 2:
            continue
        k = overrides.get(c, 1)
        if not 1 <= k < len(c):
            raise ValueError(f"quorum {k} invalid for group of {len(c)}: {sorted(c)}")
        groups.append(RecoveryGroup(cnf.layer, c, k))
    return groups


def tolerance_level(cnf: MonotoneFormula) -> int | float:
    """Largest k such that every clause has at least k + 1 literals."""
    if not cnf.clauses:
        return UNCONSTRAINED
    return min(len(c) for c in cnf.clauses) - 1


def dependability_profile(cnf: MonotoneFormula, access_points: Iterable[str] = (),
                          quorum_overrides: Mapping[frozenset[str], int] | None = None) -> DependabilityProfile:
    return DependabilityProfile(
        layer=cnf.layer,
        spof=extract_spof(cnf),
        groups=tuple(extract_recovery_groups(cnf, quorum_overrides)),
        tolerance=tolerance_level(cnf),
        access_points_removed=frozenset(access_points),
        clause_count=len(cnf.clauses),
    )


def _connected(g: Graph, s: str, t: str, removed: frozenset[str], relays_barred: frozenset[str]) -> bool:
    if s in removed or t in removed:
        return False
    seen = {s}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w == t:
                return True
            if w in seen or w in removed or w in relays_barred:
                continue
            seen.add(w)
            queue.append(w)
    return False


def subsystems_satisfied(m: LayeredModel, n: int, removed: Iterable[str] = ()) -> bool:
    """Graph-search check that every requirement subsystem keeps a flow on layer ``n``."""
    g = layer_graph(m, n)
    barred = terminal_components(m, n)
    removed = frozenset(removed)
    for r in m.requirements:
        if r.layer < n:
            continue
        pairs = project_endpoints(m, r, n)
        for anchor in itertools.product(r.source, r.destination):
            alternatives = [p for p in pairs if p.anchor == anchor]
            if alternatives and not any(_connected(g, p.source, p.destination, removed, barred)
                                        for p in alternatives):
                return False
    return True


def verify_profile_graphwise(m: LayeredModel, n: int, profile: DependabilityProfile) -> list[str]:
    """Cross-check a profile by deleting components from the layer graph.

    Every SPOF must break some requirement subsystem on its own; no single
    recovery-group member may.
    """
    out = []
    for v in sorted(profile.spof):
        if subsystems_satisfied(m, n, [v]):
            out.append(f"layer {n}: removing SPOF {v} leaves every requirement satisfied")
    for v in sorted(profile.recovery_members):
        if not subsystems_satisfied(m, n, [v]):
            out.append(f"layer {n}: removing recovery-group member {v} breaks a requirement")
    return out
