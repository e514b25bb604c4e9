"""Benchmarking: seeded perturbation studies and report serialization.

A human model is simulated by deleting each eligible feature of the robot
model with a fixed probability (Mersenne Twister via ``random.Random``,
iterating features in sorted order, one draw per feature, removing when the
draw falls below the probability).  Each run then compares the progressive
explanation against the concise one on the same perturbed model.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .explain import (
    DEFAULT_EPSILON,
    ExplanationTrace,
    ReconciliationProblem,
    generate_concise,
    generate_progressive,
)
from .metrics import MetricKind
from .model import FeatureChange, FeatureKind, Model, gamma
from .pddl import DomainAst, ProblemAst, ground
from .planner import BudgetExceededError

__all__ = [
    "DEFAULT_ELIGIBLE_KINDS",
    "PerturbSpec",
    "RunRecord",
    "SweepRecord",
    "Report",
    "perturb_model",
    "run_comparison",
    "sweep_missing_prob",
    "emit_csv",
    "emit_json",
]

# Only structural action features are deleted by default; initial state,
# goal, and costs are left alone unless explicitly requested.
DEFAULT_ELIGIBLE_KINDS = frozenset(
    {FeatureKind.PRECONDITION, FeatureKind.ADD_EFFECT, FeatureKind.DELETE_EFFECT}
)

_PERTURBABLE_KINDS = frozenset(
    {
        FeatureKind.INIT,
        FeatureKind.GOAL,
        FeatureKind.PRECONDITION,
        FeatureKind.ADD_EFFECT,
        FeatureKind.DELETE_EFFECT,
    }
)


@dataclass(frozen=True)
class PerturbSpec:
    """How to derive a human model from a robot model."""

    missing_prob: float
    seed: int
    eligible_kinds: frozenset[FeatureKind] = DEFAULT_ELIGIBLE_KINDS

    def __post_init__(self) -> None:
        if not 0.0 <= self.missing_prob <= 1.0:
            raise ValueError("missing_prob must lie in [0, 1]")
        if not self.eligible_kinds:
            raise ValueError("eligible_kinds must be non-empty")
        bad = self.eligible_kinds - _PERTURBABLE_KINDS
        if bad:
            names = ", ".join(sorted(k.value for k in bad))
            raise ValueError(f"kinds not eligible for perturbation: {names}")


def eligible_features(model: Model, kinds: frozenset[FeatureKind] = DEFAULT_ELIGIBLE_KINDS) -> list:
    """The perturbation pool: eligible features in sorted render order."""
    return sorted(
        (f for f in gamma(model) if f.kind in kinds), key=lambda f: f.render()
    )


def perturb_model(robot: Model, spec: PerturbSpec) -> tuple[Model, int, int]:
    """Delete eligible robot features at random.

    Returns the perturbed model, the number of features removed, and the
    pool size.  Deterministic for a fixed spec: features are visited in
    sorted order with one uniform draw each.
    """
    import random

    from .model import apply_change

    pool = eligible_features(robot, spec.eligible_kinds)
    rng = random.Random(spec.seed)
    removed = [f for f in pool if rng.random() < spec.missing_prob]
    model = robot
    for feat in removed:
        model = apply_change(model, FeatureChange("remove", feat))
    return model, len(removed), len(pool)


@dataclass(frozen=True)
class RunRecord:
    """One perturb-and-compare run."""

    run_index: int
    seed: int
    missing_features: int
    pool_size: int
    human_unsolvable: bool
    peg_size: int
    peg_sum_rho_p2: int
    peg_expansions: int
    peg_wall_time: float
    concise_size: int
    concise_sum_rho_p2: int
    concise_expansions: int
    concise_wall_time: float
    failed: bool = False
    failure: str = ""


@dataclass(frozen=True)
class SweepRecord:
    """One probe of the missing-probability sweep."""

    missing_prob: float
    seed: int
    missing_features: int
    pool_size: int
    human_unsolvable: bool
    size: int
    sum_rho: int
    expansions: int
    wall_time: float
    failed: bool = False
    failure: str = ""


@dataclass(frozen=True)
class Report:
    """A batch of runs plus configuration echo and column averages."""

    kind: str  # "comparison" | "sweep"
    config: dict
    records: tuple
    averages: dict


_AVERAGED_COMPARISON = (
    "missing_features",
    "peg_size",
    "peg_sum_rho_p2",
    "peg_expansions",
    "peg_wall_time",
    "concise_size",
    "concise_sum_rho_p2",
    "concise_expansions",
    "concise_wall_time",
)

_AVERAGED_SWEEP = ("missing_features", "size", "sum_rho", "expansions", "wall_time")


def _averages(records: Iterable, columns: tuple[str, ...]) -> dict:
    usable = [r for r in records if not r.failed]
    if not usable:
        return {}
    return {
        col: sum(getattr(r, col) for r in usable) / len(usable) for col in columns
    }


def _run_once(
    robot: Model,
    spec: PerturbSpec,
    metric: MetricKind,
    variant: str,
    epsilon: Fraction,
    node_budget: int | None,
    run_index: int,
) -> RunRecord:
    human, missing, pool = perturb_model(robot, spec)
    unsolvable = False
    try:
        problem = ReconciliationProblem(robot, human, node_budget=node_budget)
        unsolvable = not problem.plan_result(problem.human).solvable
        peg = generate_progressive(
            problem, metric=metric, variant=variant, epsilon=epsilon, node_budget=node_budget
        )
        concise = generate_concise(problem, metric=metric, node_budget=node_budget)
    except BudgetExceededError as exc:
        return RunRecord(
            run_index=run_index,
            seed=spec.seed,
            missing_features=missing,
            pool_size=pool,
            human_unsolvable=unsolvable,
            peg_size=0,
            peg_sum_rho_p2=0,
            peg_expansions=0,
            peg_wall_time=0.0,
            concise_size=0,
            concise_sum_rho_p2=0,
            concise_expansions=0,
            concise_wall_time=0.0,
            failed=True,
            failure=str(exc),
        )
    return RunRecord(
        run_index=run_index,
        seed=spec.seed,
        missing_features=missing,
        pool_size=pool,
        human_unsolvable=unsolvable,
        peg_size=peg.size,
        peg_sum_rho_p2=peg.sum_rho_for(MetricKind.P2),
        peg_expansions=peg.expansions,
        peg_wall_time=peg.wall_time,
        concise_size=concise.size,
        concise_sum_rho_p2=concise.sum_rho_for(MetricKind.P2),
        concise_expansions=concise.expansions,
        concise_wall_time=concise.wall_time,
    )


def run_comparison(
    domain: DomainAst | Model,
    problem: ProblemAst | None = None,
    spec: PerturbSpec = PerturbSpec(0.1, 0),
    metric: MetricKind = MetricKind.P2,
    variant: str = "safe",
    runs: int = 10,
    epsilon: Fraction = DEFAULT_EPSILON,
    node_budget: int | None = None,
) -> Report:
    """Progressive-vs-concise comparison over seeded perturbation runs.

    Run ``i`` perturbs with seed ``spec.seed + i``.  A run whose searches
    blow the node budget is kept, flagged as failed, and excluded from the
    averages.  ``domain`` may be a domain AST (with ``problem``) or an
    already ground robot model.
    """
    robot = domain if isinstance(domain, Model) else ground(domain, problem)
    records = []
    for i in range(runs):
        run_spec = PerturbSpec(spec.missing_prob, spec.seed + i, spec.eligible_kinds)
        records.append(
            _run_once(robot, run_spec, metric, variant, epsilon, node_budget, i)
        )
    config = {
        "kind": "comparison",
        "robot_digest": robot.digest(),
        "missing_prob": spec.missing_prob,
        "seed": spec.seed,
        "eligible_kinds": sorted(k.value for k in spec.eligible_kinds),
        "metric": metric.value,
        "variant": variant,
        "epsilon": str(Fraction(epsilon)),
        "runs": runs,
        "node_budget": node_budget,
    }
    return Report(
        kind="comparison",
        config=config,
        records=tuple(records),
        averages=_averages(records, _AVERAGED_COMPARISON),
    )


def sweep_missing_prob(
    domain: DomainAst | Model,
    problem: ProblemAst | None = None,
    p_lo: float = 0.06,
    p_hi: float = 0.14,
    p_step: float = 0.01,
    seed: int = 0,
    metric: MetricKind = MetricKind.P2,
    variant: str = "safe",
    eligible_kinds: frozenset[FeatureKind] = DEFAULT_ELIGIBLE_KINDS,
    epsilon: Fraction = DEFAULT_EPSILON,
    node_budget: int | None = None,
) -> Report:
    """One progressive run per missing probability on a fixed grid.

    The grid is computed with exact rationals from the decimal strings of
    the bounds, so ``0.06..0.14`` by ``0.01`` yields exactly nine probes.
    Probe ``i`` uses seed ``seed + i``.
    """
    robot = domain if isinstance(domain, Model) else ground(domain, problem)
    lo = Fraction(str(p_lo))
    hi = Fraction(str(p_hi))
    step = Fraction(str(p_step))
    if step <= 0 or hi < lo:
        raise ValueError("expected p_lo <= p_hi and a positive step")
    records = []
    i = 0
    p = lo
    while p <= hi:
        run_spec = PerturbSpec(float(p), seed + i, eligible_kinds)
        human, missing, pool = perturb_model(robot, run_spec)
        unsolvable = False
        try:
            rec_problem = ReconciliationProblem(robot, human, node_budget=node_budget)
            unsolvable = not rec_problem.plan_result(rec_problem.human).solvable
            trace = generate_progressive(
                rec_problem, metric=metric, variant=variant, epsilon=epsilon,
                node_budget=node_budget,
            )
            records.append(
                SweepRecord(
                    missing_prob=float(p),
                    seed=run_spec.seed,
                    missing_features=missing,
                    pool_size=pool,
                    human_unsolvable=unsolvable,
                    size=trace.size,
                    sum_rho=trace.sum_rho,
                    expansions=trace.expansions,
                    wall_time=trace.wall_time,
                )
            )
        except BudgetExceededError as exc:
            records.append(
                SweepRecord(
                    missing_prob=float(p),
                    seed=run_spec.seed,
                    missing_features=missing,
                    pool_size=pool,
                    human_unsolvable=unsolvable,
                    size=0,
                    sum_rho=0,
                    expansions=0,
                    wall_time=0.0,
                    failed=True,
                    failure=str(exc),
                )
            )
        i += 1
        p = lo + i * step
    config = {
        "kind": "sweep",
        "robot_digest": robot.digest(),
        "p_lo": float(lo),
        "p_hi": float(hi),
        "p_step": float(step),
        "seed": seed,
        "eligible_kinds": sorted(k.value for k in eligible_kinds),
        "metric": metric.value,
        "variant": variant,
        "epsilon": str(Fraction(epsilon)),
        "node_budget": node_budget,
    }
    return Report(
        kind="sweep",
        config=config,
        records=tuple(records),
        averages=_averages(records, _AVERAGED_SWEEP),
    )


# ---------------------------------------------------------------------------
# Serialization


def _trace_rows(trace: ExplanationTrace) -> list[list]:
    rows = [["step", "cost_star", "rho"]]
    for step in trace.steps:
        rows.append([step.index, step.cost_star, step.rho])
    return rows


def emit_csv(obj: ExplanationTrace | Report) -> str:
    """RFC 4180 CSV for a trace or a report (reports end with an average row)."""
    out = io.StringIO()
    writer = csv.writer(out)
    if isinstance(obj, ExplanationTrace):
        writer.writerows(_trace_rows(obj))
        return out.getvalue()
    if obj.kind == "comparison":
        header = [
            "run_index", "seed", "missing_features", "pool_size", "human_unsolvable",
            "peg_size", "peg_sum_rho_p2", "peg_expansions", "peg_wall_time",
            "concise_size", "concise_sum_rho_p2", "concise_expansions",
            "concise_wall_time", "failed", "failure",
        ]
    else:
        header = [
            "missing_prob", "seed", "missing_features", "pool_size",
            "human_unsolvable", "size", "sum_rho", "expansions", "wall_time",
            "failed", "failure",
        ]
    writer.writerow(header)
    for rec in obj.records:
        writer.writerow([getattr(rec, col) for col in header])
    if obj.averages:
        label_col = header[0]
        row = []
        for col in header:
            if col == label_col:
                row.append("average")
            elif col in obj.averages:
                row.append(obj.averages[col])
            else:
                row.append("")
        writer.writerow(row)
    return out.getvalue()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, MetricKind):
        return value.value
    if isinstance(value, FeatureKind):
        return value.value
    if isinstance(value, FeatureChange):
        return {"direction": value.direction, "feature": value.feature.render()}
    if isinstance(value, frozenset):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: _jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)
        }
    return value


def trace_to_dict(trace: ExplanationTrace) -> dict:
    return _jsonable(trace)


def emit_json(obj: ExplanationTrace | Report) -> str:
    """JSON mirroring the record dataclasses, snake_case keys."""
    return json.dumps(_jsonable(obj), indent=2) + "\n"
