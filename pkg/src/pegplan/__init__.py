"""Progressive explanation generation for plan-model reconciliation.

A robot plans with one STRIPS model; the human it works with may hold a
different one.  This package finds an *ordered* sequence of unit model
edits that makes the robot's plan optimal in the human's updated model,
while keeping each intermediate revision as gentle as possible under a
choice of cognitive-effort proxies.
"""

from .bench import (
    DEFAULT_ELIGIBLE_KINDS,
    PerturbSpec,
    Report,
    RunRecord,
    SweepRecord,
    eligible_features,
    emit_csv,
    emit_json,
    perturb_model,
    run_comparison,
    sweep_missing_prob,
    trace_to_dict,
)
from .explain import (
    DEFAULT_EPSILON,
    ExplanationTrace,
    ReconciliationError,
    ReconciliationProblem,
    SearchInstrument,
    StepRecord,
    candidate_changes,
    generate_concise,
    generate_progressive,
    is_complete,
    is_explanation,
    is_monotonic,
)
from .metrics import MetricKind, StepContext, heuristic, plan_edit_distance, rho
from .model import (
    ChangePreconditionError,
    Fact,
    Feature,
    FeatureChange,
    FeatureKind,
    GroundAction,
    InvalidEditError,
    Model,
    ModelError,
    UniverseMismatchError,
    apply_change,
    delta,
    gamma,
    model_distance,
    parse_change,
    parse_fact,
    parse_feature,
    reconstruct,
)
from .pddl import (
    GroundingError,
    ParseError,
    dump_model,
    ground,
    load_fixture,
    parse_domain,
    parse_fixture,
    parse_problem,
    serialize_domain,
    serialize_problem,
    split_conditional_costs,
)
from .planner import (
    BudgetExceededError,
    Plan,
    PlanningError,
    PlanResult,
    UnknownActionError,
    ValidationResult,
    optimal_plan,
    plan_cost,
    validate_plan,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ChangePreconditionError",
    "DEFAULT_ELIGIBLE_KINDS",
    "DEFAULT_EPSILON",
    "ExplanationTrace",
    "Fact",
    "Feature",
    "FeatureChange",
    "FeatureKind",
    "GroundAction",
    "GroundingError",
    "InvalidEditError",
    "MetricKind",
    "Model",
    "ModelError",
    "ParseError",
    "PerturbSpec",
    "Plan",
    "PlanResult",
    "PlanningError",
    "ReconciliationError",
    "ReconciliationProblem",
    "Report",
    "RunRecord",
    "SearchInstrument",
    "StepContext",
    "StepRecord",
    "SweepRecord",
    "UniverseMismatchError",
    "UnknownActionError",
    "ValidationResult",
    "apply_change",
    "candidate_changes",
    "delta",
    "dump_model",
    "eligible_features",
    "emit_csv",
    "emit_json",
    "gamma",
    "generate_concise",
    "generate_progressive",
    "ground",
    "heuristic",
    "is_complete",
    "is_explanation",
    "is_monotonic",
    "load_fixture",
    "model_distance",
    "optimal_plan",
    "parse_change",
    "parse_domain",
    "parse_fact",
    "parse_feature",
    "parse_fixture",
    "parse_problem",
    "perturb_model",
    "plan_cost",
    "plan_edit_distance",
    "reconstruct",
    "rho",
    "run_comparison",
    "serialize_domain",
    "serialize_problem",
    "split_conditional_costs",
    "sweep_missing_prob",
    "trace_to_dict",
    "validate_plan",
]
