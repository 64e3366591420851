"""End-to-end analysis: model -> flows -> success trees -> profiles -> reliability -> plan."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .dependability import DependabilityProfile, dependability_profile, verify_profile_graphwise
from .errors import ModelError
from .formula import MonotoneFormula, build_success_dnf, eliminate_access_points, to_minimal_cnf
from .model import LayeredModel, Violation, load_model, validate_model
from .paths import DEFAULT_PATH_CAP, PathSet, coverage_flows
from .reliability import ROW_EMISSION_THRESHOLD, ReliabilityReport, reliability_report
from .testplan import TestPlan, generate_double_fault_plan, generate_single_fault_plan, plan_size_bounds


def casestudy_path() -> Path:
    """Location of the bundled four-layer case-study model."""
    return Path(str(resources.files("layerdep") / "data" / "casestudy.json"))


class ModelValidationError(ModelError):
    def __init__(self, violations: list[Violation]):
        super().__init__(f"{len(violations)} model violation(s)")
        self.violations = violations


@dataclass
class AnalysisBundle:
    model: LayeredModel
    flows: Mapping[tuple[str, int], PathSet]
    success: Mapping[int, MonotoneFormula]
    reduced: Mapping[int, MonotoneFormula]
    cnfs: Mapping[int, MonotoneFormula]
    profiles: Mapping[int, DependabilityProfile]
    discrepancies: Mapping[int, list[str]]
    reliability: Mapping[int, ReliabilityReport]
    plan: TestPlan
    options: dict = field(default_factory=dict)


def run_pipeline(model: str | Path | LayeredModel, tolerance: int = 1, path_cap: int = DEFAULT_PATH_CAP,
                 row_threshold: int = ROW_EMISSION_THRESHOLD, self_check: bool = True) -> AnalysisBundle:
    if tolerance not in (1, 2):
        raise ValueError("tolerance must be 1 or 2")
    m = model if isinstance(model, LayeredModel) else load_model(model)
    violations = validate_model(m)
    if violations:
        raise ModelValidationError(violations)

    flows = coverage_flows(m, path_cap)
    success, reduced, cnfs, profiles, checks, reports = {}, {}, {}, {}, {}, {}
    overrides = m.quorum_overrides()
    for n in m.analyzed_layers():
        aps = m.layer(n).access_points
        success[n] = build_success_dnf(flows, n)
        reduced[n] = to_minimal_cnf(success[n], self_check=self_check)
        cnfs[n] = eliminate_access_points(reduced[n], aps)
        profiles[n] = dependability_profile(cnfs[n], aps, overrides)
        checks[n] = verify_profile_graphwise(m, n, profiles[n])
        reports[n] = reliability_report(cnfs[n], profiles[n], m.probabilities, row_threshold)

    generate = generate_single_fault_plan if tolerance == 1 else generate_double_fault_plan
    plan = generate(profiles, cnfs, m.name)
    bounds = plan_size_bounds(m, profiles)
    plan = TestPlan(plan.model, plan.tolerance, plan.templates, plan.counts, plan.excluded, plan.notes, bounds)
    return AnalysisBundle(m, flows, success, reduced, cnfs, profiles, checks, reports, plan,
                          {"tolerance": tolerance})
