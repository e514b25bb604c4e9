"""Independent reference implementations used to cross-check the library.

Everything here deliberately uses different algorithms and data structures
than the package: plans come from plain uniform-cost search over frozenset
states (no heuristic, no bitmasks), edit distance from memoized recursion
(not the iterative two-row table), and minimal explanation effort from
exhaustive enumeration of every complete change subset and every order of
it (no heuristic search).
"""

from __future__ import annotations

import heapq
import itertools
import random
from fractions import Fraction
from functools import lru_cache
from math import inf

from pegplan import (
    Fact,
    FeatureChange,
    GroundAction,
    Model,
    ReconciliationProblem,
    apply_change,
    delta,
)
from pegplan.model import ChangePreconditionError, InvalidEditError


def uniform_cost_plan(model: Model) -> tuple[int, tuple[str, ...]] | None:
    """Cheapest plan by Dijkstra over frozenset states; None if unsolvable."""
    start = frozenset(model.init)
    goal = frozenset(model.goal)
    frontier: list = [(0, 0, (), start)]
    best = {start: 0}
    tick = 0
    while frontier:
        g, _, path, state = heapq.heappop(frontier)
        if g > best.get(state, inf):
            continue
        if goal <= state:
            return g, path
        for act in model.actions:
            if act.preconditions <= state:
                nxt = (state - act.delete_effects) | act.add_effects
                ng = g + act.cost
                if ng < best.get(nxt, inf):
                    best[nxt] = ng
                    tick += 1
                    heapq.heappush(frontier, (ng, tick, path + (act.name,), nxt))
    return None


def levenshtein_recursive(a, b) -> int:
    """Edit distance by memoized recursion on sequence suffixes."""
    a = tuple(a)
    b = tuple(b)

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        if a[i] == b[j]:
            return go(i + 1, j + 1)
        return 1 + min(go(i + 1, j), go(i, j + 1), go(i + 1, j + 1))

    return go(0, 0)


def _step_effort(metric_name: str, prev: tuple, cur: tuple) -> int:
    """Effort of one step from local formulas over (cost, plan) node infos."""
    if metric_name == "p1":
        return abs(prev[0] - cur[0])
    if metric_name == "p2":
        return (prev[0] - cur[0]) ** 2
    d = levenshtein_recursive(prev[1], cur[1])
    return d if metric_name == "p3" else d * d


def exhaustive_min_effort(
    problem: ReconciliationProblem,
    metric_name: str,
    start: Model | None = None,
) -> float | int:
    """Minimum total effort over every complete ordered explanation.

    Enumerates all subsets of the model difference from ``start`` (default:
    the human model) and all permutations of each complete subset, summing
    per-step effort with local formulas.  Costs and canonical plans of the
    intermediate models come from the problem's memoized accessors, so this
    guards the search for orderings, not the planner.  Returns ``inf`` when
    no subset completes the reconciliation.
    """
    base = problem.human if start is None else start
    pool = sorted(delta(base, problem.robot), key=lambda c: c.render())

    infos: dict[frozenset, tuple] = {}

    def info(applied: frozenset, model: Model) -> tuple:
        got = infos.get(applied)
        if got is None:
            result = problem.plan_result(model)
            cost = result.plan.cost if result.solvable else 0
            got = (cost, problem.anchored_plan(model))
            infos[applied] = got
        return got

    def build(combo) -> Model | None:
        """Model holding the whole subset, or None if no order can (a
        removals-first order succeeds whenever any order does)."""
        model = base
        for change in sorted(combo, key=lambda c: (c.direction != "remove", c.render())):
            try:
                model = apply_change(model, change)
            except (ChangePreconditionError, InvalidEditError):
                return None
        return model

    best: float | int = inf
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            final = build(combo)
            if final is None or not problem.is_complete_model(final):
                continue
            for order in itertools.permutations(combo):
                total = 0
                model = base
                applied = frozenset()
                prev = info(applied, model)
                feasible = True
                for change in order:
                    try:
                        model = apply_change(model, change)
                    except (ChangePreconditionError, InvalidEditError):
                        feasible = False
                        break
                    applied = applied | {change}
                    cur = info(applied, model)
                    total += _step_effort(metric_name, prev, cur)
                    prev = cur
                    if total >= best:
                        feasible = False
                        break
                if feasible:
                    best = min(best, total)
    return best


# ---------------------------------------------------------------------------
# Random instance generation


def random_model(rng: random.Random) -> Model:
    """A small random ground model (not necessarily solvable)."""
    n_facts = rng.randint(4, 7)
    facts = []
    for i in range(n_facts):
        if rng.random() < 0.3:
            facts.append(Fact("holds", (f"o{i}",)))
        else:
            facts.append(Fact(f"p{i}"))
    actions = []
    for k in range(rng.randint(3, 6)):
        pre = frozenset(rng.sample(facts, rng.randint(0, 2)))
        add = frozenset(rng.sample(facts, rng.randint(1, 2)))
        dele = frozenset(rng.sample(facts, rng.randint(0, 1))) - add
        actions.append(GroundAction(f"act{k}", pre, add, dele, rng.randint(1, 9)))
    init = frozenset(f for f in facts if rng.random() < 0.4)
    goal = frozenset(rng.sample(facts, rng.randint(1, 2)))
    return Model(frozenset(facts), tuple(actions), init, goal)


def random_solvable_model(rng: random.Random) -> Model:
    while True:
        model = random_model(rng)
        if uniform_cost_plan(model) is not None:
            return model


def _random_edit(rng: random.Random, model: Model) -> FeatureChange | None:
    """One random feature edit that is valid on ``model``, or None."""
    from pegplan.model import Feature, FeatureKind, gamma

    facts = sorted(model.facts)
    action = rng.choice(model.actions)
    kind = rng.choice(
        [
            FeatureKind.INIT,
            FeatureKind.GOAL,
            FeatureKind.PRECONDITION,
            FeatureKind.ADD_EFFECT,
            FeatureKind.DELETE_EFFECT,
            FeatureKind.COST,
        ]
    )
    if kind is FeatureKind.COST:
        new_cost = rng.randint(1, 9)
        if new_cost == action.cost:
            return None
        return FeatureChange("add", Feature(kind, owner=action.name, cost=new_cost))
    fact = rng.choice(facts)
    owner = None if kind in (FeatureKind.INIT, FeatureKind.GOAL) else action.name
    feature = Feature(kind, owner=owner, fact=fact)
    direction = "remove" if feature in gamma(model) else "add"
    return FeatureChange(direction, feature)


def random_reconciliation(
    rng: random.Random, max_delta: int = 5
) -> ReconciliationProblem:
    """A reconciliation problem whose model difference has at most
    ``max_delta`` changes (the robot model is always solvable)."""
    while True:
        robot = random_solvable_model(rng)
        human = robot
        edits = rng.randint(1, max_delta)
        applied = 0
        for _ in range(40):
            if applied == edits:
                break
            change = _random_edit(rng, human)
            if change is None:
                continue
            try:
                human = apply_change(human, change)
            except (ChangePreconditionError, InvalidEditError):
                continue
            applied += 1
        problem = ReconciliationProblem(robot, human)
        if len(problem.pool) <= max_delta:
            return problem


def random_action_sequence(rng: random.Random, alphabet, max_len: int = 8) -> tuple:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
