"""Model reconciliation: concise and progressive explanations.

An explanation is an ordered list of unit model changes that moves the
human's model toward the robot's until the robot's plan is optimal there
with its robot-side cost.  ``generate_concise`` minimizes the number of
changes; ``generate_progressive`` minimizes the cumulative stepwise effort
under one of the :mod:`~pegplan.metrics` proxies, searching the space of
change subsets with A*.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappush, heappop
from itertools import combinations
from math import inf
from typing import Callable, Iterable, Sequence

from .metrics import MetricKind, StepContext, heuristic, rho
from .model import (
    FeatureChange,
    FeatureKind,
    InvalidEditError,
    Model,
    UniverseMismatchError,
    apply_change,
    delta,
)
from .planner import BudgetExceededError, Plan, PlanResult, optimal_plan, plan_cost

__all__ = [
    "ReconciliationError",
    "ReconciliationProblem",
    "StepRecord",
    "ExplanationTrace",
    "SearchInstrument",
    "DEFAULT_EPSILON",
    "candidate_changes",
    "is_explanation",
    "is_complete",
    "is_monotonic",
    "generate_concise",
    "generate_progressive",
]

# Tiny per-change tax added to the objective so the search never pads an
# explanation with effort-free changes; small enough (with integer-valued
# metrics) never to trade away a unit of actual effort.
DEFAULT_EPSILON = Fraction(1, 1000)


class ReconciliationError(Exception):
    """The robot/human model pair cannot form a reconciliation problem."""


def _node_info(result: PlanResult) -> tuple[int, tuple[str, ...]]:
    """Cost and plan with the unsolvable-as-zero convention applied."""
    if not result.solvable:
        return 0, ()
    return result.plan.cost, result.plan.actions


class ReconciliationProblem:
    """A robot model, a human model, and the robot plan to be explained.

    The robot plan must be optimal in the robot model.  Fact universes of
    the two models are merged so that any feature of one can be applied to
    the other; action-name universes must already agree.  Planner calls are
    memoized per model so repeated searches over the same problem share
    work.
    """

    def __init__(
        self,
        robot: Model,
        human: Model,
        robot_plan: Plan | Sequence[str] | None = None,
        node_budget: int | None = None,
    ):
        if {a.name for a in robot.actions} != {a.name for a in human.actions}:
            raise UniverseMismatchError(
                "robot and human models must share an action-name universe"
            )
        universe = robot.facts | human.facts
        self.robot = robot.with_facts(universe)
        self.human = human.with_facts(universe)
        self.node_budget = node_budget
        self._plan_cache: dict[Model, PlanResult] = {}
        self._target_cost_cache: dict[Model, int | None] = {}

        robot_result = self.plan_result(self.robot)
        if not robot_result.solvable:
            raise ReconciliationError("the robot model is unsolvable")
        optimum = robot_result.plan
        if robot_plan is None:
            self.robot_plan = optimum
        else:
            actions = robot_plan.actions if isinstance(robot_plan, Plan) else tuple(robot_plan)
            cost = plan_cost(actions, self.robot)
            if cost is None:
                raise ReconciliationError("the robot plan is infeasible in the robot model")
            if cost != optimum.cost:
                raise ReconciliationError(
                    f"the robot plan costs {cost} in the robot model, "
                    f"but the optimum costs {optimum.cost}"
                )
            self.robot_plan = Plan(actions, cost)
        self.pool: frozenset[FeatureChange] = delta(self.human, self.robot)

    # -- memoized per-model queries ------------------------------------

    def plan_result(self, model: Model) -> PlanResult:
        result = self._plan_cache.get(model)
        if result is None:
            result = optimal_plan(model, node_budget=self.node_budget)
            self._plan_cache[model] = result
        return result

    def target_plan_cost(self, model: Model) -> int | None:
        """Cost of the robot plan in ``model``, or None when infeasible."""
        if model not in self._target_cost_cache:
            self._target_cost_cache[model] = plan_cost(self.robot_plan.actions, model)
        return self._target_cost_cache[model]

    def anchored_plan(self, model: Model) -> tuple[str, ...]:
        """The model's canonical optimal plan, anchored to the robot plan.

        When the robot plan is among the model's optima it is taken as the
        canonical choice, so a finished reconciliation always lands exactly
        on the plan being explained; otherwise the planner's deterministic
        optimum is used (the empty plan for unsolvable models).
        """
        result = self.plan_result(model)
        if not result.solvable:
            return ()
        if self.target_plan_cost(model) == result.plan.cost:
            return self.robot_plan.actions
        return result.plan.actions

    def planner_calls(self) -> int:
        return len(self._plan_cache)

    # -- reconciliation predicates -------------------------------------

    def cost_gap(self, model: Model) -> float | int:
        """cost(robot plan, model) - cost*(model); inf when infeasible."""
        target = self.target_plan_cost(model)
        if target is None:
            return inf
        cost_star, _ = _node_info(self.plan_result(model))
        return target - cost_star

    def is_complete_model(self, model: Model) -> bool:
        target = self.target_plan_cost(model)
        if target is None:
            return False
        result = self.plan_result(model)
        return result.solvable and result.plan.cost == target == self.robot_plan.cost

    def apply_changes(self, changes: Iterable[FeatureChange], base: Model | None = None) -> Model:
        model = self.human if base is None else base
        for change in changes:
            model = apply_change(model, change)
        return model


def _is_cost_increasing(change: FeatureChange, model: Model) -> bool:
    """Can this change only raise (or keep) the model's optimal cost?

    Adding preconditions, removing add effects, adding delete effects,
    removing initial facts, adding goal facts, and raising action costs all
    shrink the set of plans or make them dearer.
    """
    kind = change.feature.kind
    adding = change.direction == "add"
    if kind is FeatureKind.PRECONDITION:
        return adding
    if kind is FeatureKind.ADD_EFFECT:
        return not adding
    if kind is FeatureKind.DELETE_EFFECT:
        return adding
    if kind is FeatureKind.INIT:
        return not adding
    if kind is FeatureKind.GOAL:
        return adding
    return change.feature.cost > model.action(change.feature.owner).cost


def _order_candidates(
    problem: ReconciliationProblem,
    model: Model,
    remaining: Iterable[FeatureChange],
) -> list[FeatureChange]:
    cost_star, _ = _node_info(problem.plan_result(model))
    below_target = cost_star <= problem.robot_plan.cost
    if below_target:
        # Cost-raising changes first: they close the usual gap faster.
        return sorted(
            remaining,
            key=lambda c: (not _is_cost_increasing(c, model), c.feature.render()),
        )
    return sorted(remaining, key=lambda c: c.feature.render())


def candidate_changes(
    problem: ReconciliationProblem, model: Model | None = None
) -> list[FeatureChange]:
    """Unit changes still available at a node, in search order.

    The pool is the difference between the robot model and the node's
    model: additions of robot features the node lacks, removals of node
    features the robot lacks (so nothing an explanation does can ever state
    something untrue of the robot model).
    """
    if model is None:
        model = problem.human
    return _order_candidates(problem, model, delta(model, problem.robot))


def is_explanation(
    problem: ReconciliationProblem, changes: Sequence[FeatureChange]
) -> bool:
    """Do the changes strictly shrink the human's cost gap using only true content?

    Checks that every added feature is part of the robot model, that every
    removed feature is absent from it, and that the gap between the robot
    plan's cost and the optimal cost strictly decreases.
    """
    from .model import gamma

    updated = problem.apply_changes(changes)
    g_h = gamma(problem.human)
    g_r = gamma(problem.robot)
    g_u = gamma(updated)
    if not (g_u - g_h) <= g_r:
        return False
    if not (g_h - g_u) <= (g_h - g_r):
        return False
    return problem.cost_gap(updated) < problem.cost_gap(problem.human)


def is_complete(problem: ReconciliationProblem, changes: Sequence[FeatureChange]) -> bool:
    """Is the robot plan optimal, at its robot-side cost, after the changes?"""
    return problem.is_complete_model(problem.apply_changes(changes))


def is_monotonic(
    problem: ReconciliationProblem,
    changes: Sequence[FeatureChange],
    max_remaining: int = 14,
) -> bool:
    """Is the explanation complete and immune to further true statements?

    A monotonic explanation stays complete no matter which additional
    changes from the remaining robot/human difference are applied.  Checked
    by enumerating all subsets of the remaining changes, so it is only
    feasible for small differences.
    """
    model = problem.apply_changes(changes)
    if not problem.is_complete_model(model):
        return False
    remaining = sorted(delta(model, problem.robot), key=lambda c: c.render())
    if len(remaining) > max_remaining:
        raise ReconciliationError(
            f"monotonicity check over {len(remaining)} remaining changes is too large"
        )
    for r in range(1, len(remaining) + 1):
        for extra in combinations(remaining, r):
            # removals first: additions may need an opposite slot vacated
            ordered = sorted(extra, key=lambda c: (c.direction != "remove", c.render()))
            try:
                updated = problem.apply_changes(ordered, base=model)
            except InvalidEditError:
                continue  # no valid model holds this combination
            if not problem.is_complete_model(updated):
                return False
    return True


@dataclass(frozen=True)
class StepRecord:
    """State after one change (index 0 is the unchanged human model)."""

    index: int
    change: FeatureChange | None
    model_digest: str
    solvable: bool
    cost_star: int
    plan: tuple[str, ...]
    rho: int
    planner_expansions: int
    planner_generated: int


@dataclass(frozen=True)
class ExplanationTrace:
    """An ordered explanation with its per-step records and search stats."""

    mode: str  # "peg" | "concise"
    metric: MetricKind
    variant: str
    epsilon: Fraction
    changes: tuple[FeatureChange, ...]
    steps: tuple[StepRecord, ...]
    sum_rho: int
    complete: bool
    expansions: int
    generated: int
    planner_calls: int
    wall_time: float

    @property
    def size(self) -> int:
        return len(self.changes)

    def sum_rho_for(self, kind: MetricKind) -> int:
        """Recompute the trace's total effort under another metric."""
        total = 0
        for prev, cur in zip(self.steps, self.steps[1:]):
            ctx = StepContext(
                prev_cost=prev.cost_star,
                prev_plan=prev.plan,
                cur_cost=cur.cost_star,
                cur_plan=cur.plan,
                target_plan=(),
                target_cost=0,
            )
            total += rho(kind, ctx)
        return total


@dataclass
class SearchInstrument:
    """Optional probes into the progressive search, used by tests.

    ``on_node(model, h, remaining)`` fires when a node is expanded;
    ``on_edge(parent_h, step_rho, child_h)`` fires for each generated edge.
    """

    on_node: Callable[[Model, Fraction | float, tuple[FeatureChange, ...]], None] | None = None
    on_edge: Callable[[Fraction | float, int, Fraction | float], None] | None = None


@dataclass
class _Node:
    g: Fraction
    idx_seq: tuple[int, ...]
    seq: tuple[FeatureChange, ...]
    model: Model
    h: Fraction | float
    closed: bool = False


def _build_trace(
    problem: ReconciliationProblem,
    mode: str,
    metric: MetricKind,
    variant: str,
    epsilon: Fraction,
    seq: tuple[FeatureChange, ...],
    expansions: int,
    generated: int,
    start_time: float,
) -> ExplanationTrace:
    steps: list[StepRecord] = []
    model = problem.human
    prev_cost, prev_plan = None, None
    total = 0
    for index in range(len(seq) + 1):
        if index > 0:
            model = apply_change(model, seq[index - 1])
        result = problem.plan_result(model)
        cost_star, _ = _node_info(result)
        plan = problem.anchored_plan(model)
        if index == 0:
            step_rho = 0
        else:
            ctx = StepContext(
                prev_cost=prev_cost,
                prev_plan=prev_plan,
                cur_cost=cost_star,
                cur_plan=plan,
                target_plan=problem.robot_plan.actions,
                target_cost=problem.robot_plan.cost,
            )
            step_rho = rho(metric, ctx)
            total += step_rho
        steps.append(
            StepRecord(
                index=index,
                change=seq[index - 1] if index > 0 else None,
                model_digest=model.digest(),
                solvable=result.solvable,
                cost_star=cost_star,
                plan=plan,
                rho=step_rho,
                planner_expansions=result.expansions,
                planner_generated=result.generated,
            )
        )
        prev_cost, prev_plan = cost_star, plan
    return ExplanationTrace(
        mode=mode,
        metric=metric,
        variant=variant,
        epsilon=epsilon,
        changes=seq,
        steps=tuple(steps),
        sum_rho=total,
        complete=problem.is_complete_model(model),
        expansions=expansions,
        generated=generated,
        planner_calls=problem.planner_calls(),
        wall_time=time.perf_counter() - start_time,
    )


def generate_progressive(
    problem: ReconciliationProblem,
    metric: MetricKind = MetricKind.P2,
    variant: str = "safe",
    epsilon: Fraction = DEFAULT_EPSILON,
    node_budget: int | None = None,
    instrument: SearchInstrument | None = None,
) -> ExplanationTrace:
    """Minimum cumulative-effort ordered explanation (A* over change subsets).

    Nodes are identified by the set of applied changes; g is the effort so
    far plus ``epsilon`` per change, h the metric's remaining-effort
    estimate.  Ties are broken toward lower h, then fewer changes, then the
    lexicographically smallest change-string sequence; among equally cheap
    orderings of the same set, the one that follows the candidate ordering
    (cost-raising changes first) earliest is kept.
    """
    start = time.perf_counter()
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    target_plan = problem.robot_plan.actions
    target_cost = problem.robot_plan.cost
    pool_size = len(problem.pool)

    def node_ctx(model: Model) -> StepContext:
        cost_star, _ = _node_info(problem.plan_result(model))
        return StepContext(
            prev_cost=cost_star,
            prev_plan=problem.anchored_plan(model),
            cur_cost=cost_star,
            cur_plan=problem.anchored_plan(model),
            target_plan=target_plan,
            target_cost=target_cost,
        )

    root_model = problem.human
    root_ctx = node_ctx(root_model)
    root_h = heuristic(metric, variant, root_ctx, pool_size)
    if root_h == inf:
        raise ReconciliationError("no complete explanation is reachable")

    root_key: frozenset[FeatureChange] = frozenset()
    nodes: dict[frozenset[FeatureChange], _Node] = {
        root_key: _Node(Fraction(0), (), (), root_model, root_h)
    }
    counter = 0
    heap: list = [(root_h, root_h, 0, (), (), counter, root_key)]
    expansions = 0
    generated = 0

    while heap:
        f, h, n_changes, seq_strings, idx_seq, _, key = heappop(heap)
        node = nodes[key]
        if node.closed or node.idx_seq != idx_seq:
            continue  # stale entry: the node was improved or already expanded
        node.closed = True
        expansions += 1
        if node_budget is not None and expansions > node_budget:
            raise BudgetExceededError(
                f"progressive search exceeded the node budget of {node_budget}"
            )
        model = node.model
        if instrument and instrument.on_node:
            instrument.on_node(model, node.h, node.seq)
        if problem.is_complete_model(model):
            return _build_trace(
                problem, "peg", metric, variant, epsilon, node.seq,
                expansions, generated, start,
            )
        applied = key
        remaining = [c for c in problem.pool if c not in applied]
        ordered = _order_candidates(problem, model, remaining)
        parent_cost, _ = _node_info(problem.plan_result(model))
        parent_plan = problem.anchored_plan(model)
        child_remaining = len(remaining) - 1
        for idx, change in enumerate(ordered):
            try:
                child_model = apply_change(model, change)
            except InvalidEditError:
                # e.g. adding a delete effect before the matching add effect
                # was removed; the change stays available further down
                continue
            child_key = applied | {change}
            child_cost, _ = _node_info(problem.plan_result(child_model))
            child_plan = problem.anchored_plan(child_model)
            ctx = StepContext(
                prev_cost=parent_cost,
                prev_plan=parent_plan,
                cur_cost=child_cost,
                cur_plan=child_plan,
                target_plan=target_plan,
                target_cost=target_cost,
            )
            step_rho = rho(metric, ctx)
            child_h = heuristic(metric, variant, ctx, child_remaining)
            if instrument and instrument.on_edge:
                instrument.on_edge(node.h, step_rho, child_h)
            if child_h == inf:
                continue  # dead end: effort gap left but no changes to spend
            child_g = node.g + step_rho + epsilon
            child_idx = idx_seq + (idx,)
            existing = nodes.get(child_key)
            if existing is not None and (
                child_g > existing.g
                or (child_g == existing.g and child_idx >= existing.idx_seq)
            ):
                continue
            child_seq = node.seq + (change,)
            if existing is None:
                nodes[child_key] = _Node(child_g, child_idx, child_seq, child_model, child_h)
            else:
                existing.g = child_g
                existing.idx_seq = child_idx
                existing.seq = child_seq
                existing.h = child_h
                existing.closed = False
            counter += 1
            generated += 1
            heappush(
                heap,
                (
                    child_g + child_h,
                    child_h,
                    len(child_seq),
                    tuple(c.render() for c in child_seq),
                    child_idx,
                    counter,
                    child_key,
                ),
            )

    raise ReconciliationError("search exhausted without finding a complete explanation")


def generate_concise(
    problem: ReconciliationProblem,
    metric: MetricKind = MetricKind.P2,
    node_budget: int | None = None,
) -> ExplanationTrace:
    """Minimum-cardinality complete explanation.

    Explores change subsets in order of size, then lexicographically by the
    sorted change strings, so the result is the deterministic smallest
    complete set; the ordering of changes within it is the discovery order,
    which is reported but not optimized.  ``metric`` only labels the trace's
    per-step effort records.
    """
    start = time.perf_counter()
    root_key: frozenset[FeatureChange] = frozenset()
    seqs: dict[frozenset[FeatureChange], tuple[FeatureChange, ...]] = {root_key: ()}
    models: dict[frozenset[FeatureChange], Model] = {root_key: problem.human}
    heap: list = [(0, (), root_key)]
    seen: set[frozenset[FeatureChange]] = {root_key}
    expansions = 0
    generated = 0

    while heap:
        size, _, key = heappop(heap)
        expansions += 1
        if node_budget is not None and expansions > node_budget:
            raise BudgetExceededError(
                f"concise search exceeded the node budget of {node_budget}"
            )
        model = models[key]
        if problem.is_complete_model(model):
            return _build_trace(
                problem, "concise", metric, "safe", Fraction(0), seqs[key],
                expansions, generated, start,
            )
        remaining = [c for c in problem.pool if c not in key]
        for change in _order_candidates(problem, model, remaining):
            child_key = key | {change}
            if child_key in seen:
                continue
            try:
                child_model = apply_change(model, change)
            except InvalidEditError:
                continue  # not applicable yet at this node; retry deeper
            seen.add(child_key)
            seqs[child_key] = seqs[key] + (change,)
            models[child_key] = child_model
            generated += 1
            heappush(
                heap,
                (size + 1, tuple(sorted(c.render() for c in child_key)), child_key),
            )

    raise ReconciliationError("search exhausted without finding a complete explanation")
