"""Dependability analysis of layered distributed-system models.

Each layer's success formula yields its single points of failure and recovery
groups; those in turn drive the reliability figures and the fault-injection plan.
"""

__version__ = "0.1.0"

from .dependability import (
    DependabilityProfile,
    RecoveryGroup,
    dependability_profile,
    extract_recovery_groups,
    extract_spof,
    tolerance_level,
    verify_profile_graphwise,
)
from .errors import (
    AnalysisError,
    InvariantError,
    LayerdepError,
    ModelError,
    PathExplosionError,
    VariableCapError,
)
from .formula import (
    FS,
    OS,
    MonotoneFormula,
    build_success_dnf,
    eliminate_access_points,
    evaluate,
    to_minimal_cnf,
)
from .model import LayeredModel, layer_graph, load_model, parse_model, serialize_model, validate_model
from .paths import coverage_flows, enumerate_simple_paths, project_endpoints
from .pipeline import AnalysisBundle, casestudy_path, run_pipeline
from .reliability import (
    closed_form_reliability,
    combination_counts,
    deviation,
    deviation_curve,
    exact_reliability,
    limited_coverage,
    reliability_report,
    truth_table,
)
from .render import render
from .testplan import generate_double_fault_plan, generate_single_fault_plan, plan_size_bounds

__all__ = [
    "AnalysisBundle",
    "AnalysisError",
    "build_success_dnf",
    "casestudy_path",
    "closed_form_reliability",
    "combination_counts",
    "coverage_flows",
    "dependability_profile",
    "DependabilityProfile",
    "deviation",
    "deviation_curve",
    "eliminate_access_points",
    "enumerate_simple_paths",
    "evaluate",
    "exact_reliability",
    "extract_recovery_groups",
    "extract_spof",
    "FS",
    "generate_double_fault_plan",
    "generate_single_fault_plan",
    "InvariantError",
    "layer_graph",
    "LayerdepError",
    "LayeredModel",
    "limited_coverage",
    "load_model",
    "ModelError",
    "MonotoneFormula",
    "OS",
    "parse_model",
    "PathExplosionError",
    "plan_size_bounds",
    "project_endpoints",
    "RecoveryGroup",
    "reliability_report",
    "render",
    "run_pipeline",
    "serialize_model",
    "to_minimal_cnf",
    "tolerance_level",
    "truth_table",
    "validate_model",
    "VariableCapError",
    "verify_profile_graphwise",
]
