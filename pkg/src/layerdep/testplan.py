"""Fault-injection / repair test templates derived from recovery groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .dependability import DependabilityProfile
from .formula import OS, MonotoneFormula, evaluate, failure_assignment
from .model import LayeredModel

INJECT = "inject"
REPAIR = "repair"
SENSING = "sensing"
SWITCHING = "switching"


@dataclass(frozen=True)
class TestStep:
    phase: str
    description: str
    conditional: bool = False


@dataclass(frozen=True)
class TestTemplate:
    id: str
    layer: int
    kind: str
    targets: tuple[str, ...]
    steps: tuple[TestStep, ...]
    expected_state: str = OS

    __test__ = False  # keep pytest from collecting this class


@dataclass(frozen=True)
class LayerBound:
    layer: int
    components: int
    spof: int
    access_points: int
    recovery_members: int
    templates_from_groups: int
    templates_from_components: int

    @property
    def consistent(self) -> bool:
        return self.templates_from_groups == self.templates_from_components


@dataclass(frozen=True)
class PlanBounds:
    layers: tuple[LayerBound, ...]
    total: int
    upper_single: int
    upper_double: int

    @property
    def discrepancies(self) -> tuple[int, ...]:
        return tuple(b.layer for b in self.layers if not b.consistent)


@dataclass(frozen=True)
class TestPlan:
    model: str
    tolerance: int
    templates: tuple[TestTemplate, ...]
    counts: Mapping[int, int]
    excluded: tuple[tuple[int, tuple[str, ...]], ...] = ()
    notes: tuple[str, ...] = ()
    bounds: PlanBounds | None = field(default=None, compare=False)

    __test__ = False

    @property
    def total(self) -> int:
        return len(self.templates)


def _steps(kind: str, targets: tuple[str, ...]) -> tuple[TestStep, ...]:
    names = " and ".join(targets)
    if kind == INJECT:
        return (
            TestStep(SENSING, f"failure of {names} is detected and switching is triggered"),
            TestStep(SWITCHING, f"data flows are re-routed around {names}; system remains in OS"),
        )
    return (
        TestStep(SENSING, f"resurrection of {names} is detected; switching is triggered if necessary", True),
        TestStep(SWITCHING, "initial topology is restored if necessary; system remains in OS", True),
    )


def _pair(layer: int, targets: tuple[str, ...]) -> list[TestTemplate]:
    tag = "+".join(targets)
    return [
        TestTemplate(f"L{layer}-INJ-{tag}", layer, INJECT, targets, _steps(INJECT, targets)),
        TestTemplate(f"L{layer}-REP-{tag}", layer, REPAIR, targets, _steps(REPAIR, targets)),
    ]


def _generate(profiles: Mapping[int, DependabilityProfile], cnfs: Mapping[int, MonotoneFormula],
              tolerance: int, model: str) -> TestPlan:
    templates = []
    counts = {}
    excluded = []
    notes = []
    spof = sorted(v for p in profiles.values() for v in p.spof)
    for n in sorted(profiles):
        profile, f = profiles[n], cnfs[n]
        counts[n] = 0
        if f.is_true:
            continue
        if not profile.meets(tolerance):
            notes.append(f"layer {n}: requested tolerance {tolerance} unmet "
                         f"(tolerates {profile.tolerance}, {profile.clause_count} clauses)")
        members = sorted(profile.recovery_members - profile.access_points_removed)
        candidates = [(v,) for v in members]
        if tolerance >= 2:
            candidates += list(itertools.combinations(members, 2))
        for targets in candidates:
            if evaluate(f, failure_assignment(f, targets)) != OS:
                excluded.append((n, targets))
                continue
            templates.extend(_pair(n, targets))
            counts[n] += 2
    if not templates:
        notes.append("no recovery groups; see SPOF disaster-recovery list")
    if spof:
        notes.append("SPOFs require disaster-recovery plans, not tests: " + ", ".join(spof))
    return TestPlan(model, tolerance, tuple(templates), counts, tuple(excluded), tuple(notes))


def generate_single_fault_plan(profiles: Mapping[int, DependabilityProfile],
                               cnfs: Mapping[int, MonotoneFormula], model: str = "") -> TestPlan:
    """One inject/repair pair per recovery-group member whose loss the layer survives."""
    return _generate(profiles, cnfs, 1, model)


def generate_double_fault_plan(profiles: Mapping[int, DependabilityProfile],
                               cnfs: Mapping[int, MonotoneFormula], model: str = "") -> TestPlan:
    """Single-fault templates plus one inject/repair pair per survivable member pair."""
    return _generate(profiles, cnfs, 2, model)


def plan_size_bounds(m: LayeredModel, profiles: Mapping[int, DependabilityProfile]) -> PlanBounds:
    """Template counts per layer from group membership and from component counts.

    The two counts differ when some non-SPOF, non-access-point component lies on
    no flow; such layers are listed in ``discrepancies``.

    The functional layer is excluded; it has no components to inject faults into.
    """
    bounds = []
    upper_single = upper_double = 0
    for n in m.analyzed_layers():
        layer = m.layer(n)
        v = len(layer.components)
        upper_single += 2 * (v - 1)
        upper_double += 2 * (v - 1) ** 2
        profile = profiles.get(n)
        if profile is None:
            continue
        aps = len(layer.access_points)
        bounds.append(LayerBound(
            layer=n,
            components=v,
            spof=len(profile.spof),
            access_points=aps,
            recovery_members=len(profile.recovery_members),
            templates_from_groups=2 * len(profile.recovery_members),
            templates_from_components=2 * (v - len(profile.spof) - aps),
        ))
    return PlanBounds(tuple(bounds), sum(b.templates_from_groups for b in bounds), upper_single, upper_double)
