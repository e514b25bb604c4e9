"""Optimal planning over ground models.

A* with the h-max delete-relaxation heuristic (admissible and consistent),
so the first goal expansion is cost-optimal.  Ties are broken
deterministically: lower f, then lower h, then the lexicographically
smallest action-name path, which makes the returned plan a stable canonical
choice for a given model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from heapq import heappush, heappop
from math import inf
from typing import Iterable, Sequence

from .model import Fact, Model

__all__ = [
    "Plan",
    "PlanResult",
    "ValidationResult",
    "PlanningError",
    "UnknownActionError",
    "BudgetExceededError",
    "optimal_plan",
    "plan_cost",
    "validate_plan",
]


class PlanningError(Exception):
    """Base class for planner errors."""


class UnknownActionError(PlanningError):
    """A plan references an action the model does not define."""


class BudgetExceededError(PlanningError):
    """A search exceeded its node budget; distinct from unsolvability."""


@dataclass(frozen=True)
class Plan:
    """An action-name sequence with its total cost in the source model."""

    actions: tuple[str, ...]
    cost: int


@dataclass(frozen=True)
class PlanResult:
    """Outcome of an optimal-plan search, with search statistics."""

    solvable: bool
    plan: Plan | None
    expansions: int
    generated: int
    wall_time: float


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    message: str
    failed_index: int | None = None


class _Compiled:
    """Bitmask encoding of a model for the search inner loop."""

    __slots__ = (
        "facts",
        "index",
        "names",
        "costs",
        "pre_masks",
        "add_masks",
        "del_masks",
        "pre_idx",
        "add_idx",
        "consumers",
        "no_pre",
        "init_mask",
        "goal_mask",
        "goal_idx",
    )

    def __init__(self, model: Model):
        self.facts = sorted(model.facts, key=lambda f: f.render())
        self.index = {f: i for i, f in enumerate(self.facts)}
        self.names = []
        self.costs = []
        self.pre_masks = []
        self.add_masks = []
        self.del_masks = []
        self.pre_idx = []
        self.add_idx = []
        self.consumers = [[] for _ in self.facts]
        self.no_pre = []
        for ai, act in enumerate(model.actions):
            self.names.append(act.name)
            self.costs.append(act.cost)
            pre = sorted(self.index[f] for f in act.preconditions)
            add = sorted(self.index[f] for f in act.add_effects)
            dele = sorted(self.index[f] for f in act.delete_effects)
            self.pre_masks.append(_mask(pre))
            self.add_masks.append(_mask(add))
            self.del_masks.append(_mask(dele))
            self.pre_idx.append(pre)
            self.add_idx.append(add)
            for p in pre:
                self.consumers[p].append(ai)
            if not pre:
                self.no_pre.append(ai)
        self.init_mask = _mask(self.index[f] for f in model.init)
        self.goal_mask = _mask(self.index[f] for f in model.goal)
        self.goal_idx = sorted(self.index[f] for f in model.goal)


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _hmax(c: _Compiled, state: int) -> float:
    """Max-cost delete-relaxation estimate of reaching the goal from state."""
    if not c.goal_idx:
        return 0
    costs = [inf] * len(c.facts)
    heap: list[tuple[int, int]] = []
    for i in range(len(c.facts)):
        if state >> i & 1:
            costs[i] = 0
            heappush(heap, (0, i))
    unsat = [len(p) for p in c.pre_idx]
    for ai in c.no_pre:
        trigger = c.costs[ai]
        for g in c.add_idx[ai]:
            if trigger < costs[g]:
                costs[g] = trigger
                heappush(heap, (trigger, g))
    while heap:
        cost, fact = heappop(heap)
        if cost > costs[fact]:
            continue
        for ai in c.consumers[fact]:
            unsat[ai] -= 1
            if unsat[ai] == 0:
                trigger = cost + c.costs[ai]
                for g in c.add_idx[ai]:
                    if trigger < costs[g]:
                        costs[g] = trigger
                        heappush(heap, (trigger, g))
    h = 0
    for g in c.goal_idx:
        if costs[g] is inf:
            return inf
        if costs[g] > h:
            h = costs[g]
    return h


def optimal_plan(model: Model, node_budget: int | None = None) -> PlanResult:
    """Find a cost-optimal plan, or report unsolvability.

    Deterministic for a fixed model: among equally cheap nodes the search
    prefers lower heuristic values and then the lexicographically smallest
    action-name path, so repeated calls return the same plan and statistics.
    Raises :class:`BudgetExceededError` when ``node_budget`` expansions are
    exceeded before an answer is found.
    """
    start = time.perf_counter()
    c = _Compiled(model)
    init = c.init_mask
    goal = c.goal_mask
    expansions = 0
    generated = 0

    h_cache: dict[int, float] = {}

    def h_of(state: int) -> float:
        h = h_cache.get(state)
        if h is None:
            h = _hmax(c, state)
            h_cache[state] = h
        return h

    h0 = h_of(init)
    if h0 is inf:
        return PlanResult(False, None, 0, 0, time.perf_counter() - start)

    empty: tuple[str, ...] = ()
    # best[state] = (g, path); equal-g rediscoveries keep the lex-smaller path
    best: dict[int, tuple[int, tuple[str, ...]]] = {init: (0, empty)}
    heap: list[tuple[float, float, tuple[str, ...], int, int]] = [(h0, h0, empty, 0, init)]
    closed: set[int] = set()
    action_range = range(len(c.names))

    while heap:
        f, h, path, g, state = heappop(heap)
        if state in closed:
            continue
        rec_g, rec_path = best[state]
        if g != rec_g or path != rec_path:
            continue  # stale entry
        closed.add(state)
        expansions += 1
        if node_budget is not None and expansions > node_budget:
            raise BudgetExceededError(
                f"optimal-plan search exceeded the node budget of {node_budget}"
            )
        if state & goal == goal:
            return PlanResult(
                True, Plan(path, g), expansions, generated, time.perf_counter() - start
            )
        for ai in action_range:
            pre = c.pre_masks[ai]
            if state & pre != pre:
                continue
            succ = (state & ~c.del_masks[ai]) | c.add_masks[ai]
            if succ in closed:
                continue
            g2 = g + c.costs[ai]
            path2 = path + (c.names[ai],)
            rec = best.get(succ)
            if rec is not None and (g2, path2) >= rec:
                continue
            h2 = h_of(succ)
            if h2 is inf:
                continue
            best[succ] = (g2, path2)
            heappush(heap, (g2 + h2, h2, path2, g2, succ))
            generated += 1

    return PlanResult(False, None, expansions, generated, time.perf_counter() - start)


def _plan_actions(plan: Plan | Sequence[str]) -> tuple[str, ...]:
    if isinstance(plan, Plan):
        return plan.actions
    return tuple(plan)


def plan_cost(plan: Plan | Sequence[str], model: Model) -> int | None:
    """Total cost of executing the plan in the model, or None if infeasible.

    Infeasible means an unmet precondition along the way or an unmet goal at
    the end.  Unknown action names raise :class:`UnknownActionError` instead,
    since they indicate a plan from a different action universe.
    """
    actions = model.action_map()
    state = set(model.init)
    total = 0
    for name in _plan_actions(plan):
        act = actions.get(name)
        if act is None:
            raise UnknownActionError(f"model defines no action named {name!r}")
        if not act.preconditions <= state:
            return None
        state -= act.delete_effects
        state |= act.add_effects
        total += act.cost
    if not model.goal <= state:
        return None
    return total


def validate_plan(plan: Plan | Sequence[str], model: Model) -> ValidationResult:
    """Like :func:`plan_cost` but with a step-level diagnostic."""
    actions = model.action_map()
    state = set(model.init)
    total = 0
    for i, name in enumerate(_plan_actions(plan)):
        act = actions.get(name)
        if act is None:
            return ValidationResult(False, f"step {i}: unknown action {name!r}", i)
        missing = act.preconditions - state
        if missing:
            facts = ", ".join(sorted(f.render() for f in missing))
            return ValidationResult(
                False, f"step {i}: action {name} requires unmet facts: {facts}", i
            )
        state -= act.delete_effects
        state |= act.add_effects
        total += act.cost
    unmet = model.goal - state
    if unmet:
        facts = ", ".join(sorted(f.render() for f in unmet))
        return ValidationResult(False, f"goal facts not achieved: {facts}", None)
    return ValidationResult(True, f"plan is valid; cost = {total}", None)
