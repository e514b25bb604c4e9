"""Command-line interface.

Subcommands: ``plan`` (canonical optimal plan), ``explain`` (concise or
progressive explanation), ``validate`` (check a change list against a
problem), ``bench`` (progressive-vs-concise perturbation study), and
``sweep`` (missing-probability sweep).  Data goes to stdout or ``--out``;
diagnostics go to stderr.  Exit codes: 0 success, 1 domain errors
(unsolvable or invalid inputs), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .bench import (
    DEFAULT_ELIGIBLE_KINDS,
    PerturbSpec,
    emit_csv,
    emit_json,
    run_comparison,
    sweep_missing_prob,
)
from .explain import (
    DEFAULT_EPSILON,
    ExplanationTrace,
    ReconciliationError,
    ReconciliationProblem,
    generate_concise,
    generate_progressive,
    is_complete,
    is_explanation,
)
from .metrics import MetricKind
from .model import Model, ModelError, parse_change
from .pddl import GroundingError, ParseError, ground, load_fixture, parse_domain, parse_problem
from .planner import BudgetExceededError, PlanningError, optimal_plan

__all__ = ["dispatch", "main"]

_ENV_BUDGET = "PEG_NODE_BUDGET"


class _CliError(Exception):
    """Domain-level failure: message printed to stderr, exit code 1."""


def _node_budget(args) -> int | None:
    if args.node_budget is not None:
        return args.node_budget
    raw = os.environ.get(_ENV_BUDGET)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _CliError(f"{_ENV_BUDGET} must be an integer, got {raw!r}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _CliError(str(exc)) from None


def _load_pddl_model(domain_path: str, problem_path: str) -> Model:
    domain = parse_domain(_read_text(domain_path))
    problem = parse_problem(_read_text(problem_path))
    return ground(domain, problem)


def _load_robot(args) -> Model:
    if args.fixture:
        models = load_fixture_checked(args.fixture)
        if "robot" in models:
            return models["robot"]
        if len(models) == 1:
            return next(iter(models.values()))
        raise _CliError(
            f"fixture {args.fixture} defines no 'robot' model "
            f"(found: {', '.join(sorted(models))})"
        )
    if args.robot_domain and args.robot_problem:
        return _load_pddl_model(args.robot_domain, args.robot_problem)
    raise _CliError("expected --fixture or both --robot-domain and --robot-problem")


def load_fixture_checked(path: str):
    _read_text(path)  # surface missing-file errors uniformly
    return load_fixture(path)


def _load_pair(args) -> tuple[Model, Model]:
    if args.fixture:
        models = load_fixture_checked(args.fixture)
        if "robot" not in models or "human" not in models:
            raise _CliError(
                f"fixture {args.fixture} must define models named 'robot' and 'human'"
            )
        return models["robot"], models["human"]
    if args.robot_domain and args.robot_problem and args.human_domain and args.human_problem:
        robot = _load_pddl_model(args.robot_domain, args.robot_problem)
        human = _load_pddl_model(args.human_domain, args.human_problem)
        return robot, human
    raise _CliError(
        "expected --fixture or all of --robot-domain, --robot-problem, "
        "--human-domain, --human-problem"
    )


def _read_plan_file(path: str) -> tuple[str, ...]:
    actions = []
    for raw in _read_text(path).splitlines():
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise _CliError(f"malformed plan line {raw!r}: expected (name arg1 arg2)")
        actions.append("-".join(line[1:-1].split()))
    return tuple(actions)


def _write_output(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_plan_text(plan_actions: tuple[str, ...], cost: int) -> str:
    lines = [f"({name})" for name in plan_actions]
    lines.append(f"; cost = {cost}")
    return "\n".join(lines) + "\n"


def _trace_text(trace: ExplanationTrace) -> str:
    lines = [
        f"mode: {trace.mode}",
        f"metric: {trace.metric.value} (variant: {trace.variant})",
        f"size: {trace.size}",
        f"sum_rho: {trace.sum_rho}",
        f"complete: {str(trace.complete).lower()}",
    ]
    for step in trace.steps:
        if step.change is None:
            lines.append(
                f"step 0: cost* = {step.cost_star}"
                + ("" if step.solvable else " (unsolvable)")
            )
        else:
            lines.append(
                f"step {step.index}: {step.change.render()} -> cost* = {step.cost_star}"
                + ("" if step.solvable else " (unsolvable)")
                + f", rho = {step.rho}"
            )
    lines.append(
        f"search: {trace.expansions} expansions, {trace.generated} generated, "
        f"{trace.planner_calls} planner calls"
    )
    return "\n".join(lines) + "\n"


def _trace_output(args, trace: ExplanationTrace) -> str:
    if args.format == "json":
        return emit_json(trace)
    if args.format == "csv":
        return emit_csv(trace)
    return _trace_text(trace)


def _cmd_plan(args) -> int:
    model = _load_robot(args)
    result = optimal_plan(model, node_budget=_node_budget(args))
    print(
        f"expansions = {result.expansions}\ngenerated = {result.generated}",
        file=sys.stderr,
    )
    if not result.solvable:
        raise _CliError("the model is unsolvable")
    if args.format == "json":
        payload = {
            "actions": list(result.plan.actions),
            "cost": result.plan.cost,
            "expansions": result.expansions,
            "generated": result.generated,
        }
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        _write_output(args, _render_plan_text(result.plan.actions, result.plan.cost))
    return 0


def _build_problem(args) -> ReconciliationProblem:
    robot, human = _load_pair(args)
    plan = _read_plan_file(args.plan) if args.plan else None
    return ReconciliationProblem(robot, human, robot_plan=plan, node_budget=_node_budget(args))


def _cmd_explain(args) -> int:
    problem = _build_problem(args)
    metric = MetricKind.from_name(args.metric)
    if args.mode == "concise":
        trace = generate_concise(problem, metric=metric, node_budget=_node_budget(args))
    else:
        trace = generate_progressive(
            problem,
            metric=metric,
            variant=args.variant,
            epsilon=Fraction(args.epsilon),
            node_budget=_node_budget(args),
        )
    _write_output(args, _trace_output(args, trace))
    return 0


def _read_changes(path: str):
    text = sys.stdin.read() if path == "-" else _read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        raw = payload.get("changes", [])
        return [parse_change(f"{c['direction']} {c['feature']}") for c in raw]
    changes = []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if line:
            changes.append(parse_change(line))
    return changes


def _cmd_validate(args) -> int:
    problem = _build_problem(args)
    changes = _read_changes(args.changes)
    explanation = is_explanation(problem, changes)
    complete = is_complete(problem, changes)
    payload = {
        "changes": len(changes),
        "explanation": explanation,
        "complete": complete,
    }
    _write_output(args, json.dumps(payload, indent=2) + "\n")
    if not complete:
        print("the change list is not a complete explanation", file=sys.stderr)
        return 1
    return 0


def _eligible_kinds(args) -> frozenset:
    from .model import FeatureKind

    if not args.eligible_kinds:
        return DEFAULT_ELIGIBLE_KINDS
    kinds = set()
    for name in args.eligible_kinds.split(","):
        try:
            kinds.add(FeatureKind(name.strip()))
        except ValueError:
            raise _CliError(f"unknown feature kind {name.strip()!r}") from None
    return frozenset(kinds)


def _report_output(args, report) -> str:
    if args.format == "json":
        return emit_json(report)
    return emit_csv(report)


def _cmd_bench(args) -> int:
    robot = _load_robot(args)
    spec = PerturbSpec(args.missing_prob, args.seed, _eligible_kinds(args))
    report = run_comparison(
        robot,
        spec=spec,
        metric=MetricKind.from_name(args.metric),
        variant=args.variant,
        runs=args.runs,
        epsilon=Fraction(args.epsilon),
        node_budget=_node_budget(args),
    )
    _write_output(args, _report_output(args, report))
    return 0


def _cmd_sweep(args) -> int:
    robot = _load_robot(args)
    report = sweep_missing_prob(
        robot,
        p_lo=args.p_lo,
        p_hi=args.p_hi,
        p_step=args.p_step,
        seed=args.seed,
        metric=MetricKind.from_name(args.metric),
        variant=args.variant,
        eligible_kinds=_eligible_kinds(args),
        epsilon=Fraction(args.epsilon),
        node_budget=_node_budget(args),
    )
    _write_output(args, _report_output(args, report))
    return 0


def _add_model_inputs(parser: argparse.ArgumentParser, human: bool = True) -> None:
    parser.add_argument("--robot-domain", help="robot PDDL domain file")
    parser.add_argument("--robot-problem", help="robot PDDL problem file")
    if human:
        parser.add_argument("--human-domain", help="human PDDL domain file")
        parser.add_argument("--human-problem", help="human PDDL problem file")
    parser.add_argument("--fixture", help="native fixture file (robot/human models)")


def _add_common(parser: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    parser.add_argument("--node-budget", type=int, default=None,
                        help=f"search-node budget (default: ${_ENV_BUDGET} or unlimited)")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    parser.add_argument("--format", choices=formats, default=formats[0])


def _add_metric_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", choices=["p1", "p2", "p3", "p4"], default="p2")
    parser.add_argument("--variant", choices=["paper", "safe"], default="safe",
                        help="heuristic variant for the progressive search")
    parser.add_argument("--epsilon", default=str(DEFAULT_EPSILON),
                        help="per-change tie-break tax (exact rational, e.g. 1/1000)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pegplan",
        description="Progressive explanations for plan-model reconciliation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="canonical optimal plan of a model")
    _add_model_inputs(p_plan, human=False)
    _add_common(p_plan, ("text", "json"))
    p_plan.set_defaults(func=_cmd_plan)

    p_explain = sub.add_parser("explain", help="explain the robot plan to the human model")
    _add_model_inputs(p_explain)
    p_explain.add_argument("--plan", help="plan file overriding the robot optimum")
    p_explain.add_argument("--mode", choices=["concise", "peg"], default="peg")
    _add_metric_opts(p_explain)
    _add_common(p_explain, ("json", "text", "csv"))
    p_explain.set_defaults(func=_cmd_explain)

    p_validate = sub.add_parser("validate", help="check a change list against a problem")
    p_validate.add_argument("changes", help="change list file, explain JSON, or - for stdin")
    _add_model_inputs(p_validate)
    p_validate.add_argument("--plan", help="plan file overriding the robot optimum")
    _add_common(p_validate, ("json",))
    p_validate.set_defaults(func=_cmd_validate)

    p_bench = sub.add_parser("bench", help="progressive-vs-concise perturbation study")
    p_bench.add_argument("--domain", dest="robot_domain", help="robot PDDL domain file")
    p_bench.add_argument("--problem", dest="robot_problem", help="robot PDDL problem file")
    p_bench.add_argument("--fixture", help="native fixture file (robot model)")
    p_bench.add_argument("--missing-prob", type=float, default=0.1)
    p_bench.add_argument("--runs", type=int, default=10)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--eligible-kinds", default="",
                         help="comma-separated feature kinds to perturb")
    _add_metric_opts(p_bench)
    _add_common(p_bench, ("csv", "json"))
    p_bench.set_defaults(func=_cmd_bench)

    p_sweep = sub.add_parser("sweep", help="missing-probability sweep")
    p_sweep.add_argument("--domain", dest="robot_domain", help="robot PDDL domain file")
    p_sweep.add_argument("--problem", dest="robot_problem", help="robot PDDL problem file")
    p_sweep.add_argument("--fixture", help="native fixture file (robot model)")
    p_sweep.add_argument("--p-lo", type=float, default=0.06)
    p_sweep.add_argument("--p-hi", type=float, default=0.14)
    p_sweep.add_argument("--p-step", type=float, default=0.01)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--eligible-kinds", default="",
                         help="comma-separated feature kinds to perturb")
    _add_metric_opts(p_sweep)
    _add_common(p_sweep, ("csv", "json"))
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        _CliError,
        ParseError,
        GroundingError,
        ModelError,
        PlanningError,
        BudgetExceededError,
        ReconciliationError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
