"""Optimal-planner tests, including the uniform-cost cross-check."""

import random

import pytest

from pegplan import (
    BudgetExceededError,
    Fact,
    GroundAction,
    Model,
    UnknownActionError,
    optimal_plan,
    plan_cost,
    validate_plan,
)

from oracles import random_model, random_solvable_model, uniform_cost_plan

P, Q, G = Fact("p"), Fact("q"), Fact("g")


def chain_model() -> Model:
    # p --one--> q --two--> g, plus an expensive direct jump
    return Model(
        frozenset({P, Q, G}),
        (
            GroundAction("one", frozenset({P}), frozenset({Q}), frozenset(), 2),
            GroundAction("two", frozenset({Q}), frozenset({G}), frozenset(), 3),
            GroundAction("jump", frozenset({P}), frozenset({G}), frozenset(), 6),
        ),
        frozenset({P}),
        frozenset({G}),
    )


class TestOptimalPlan:
    def test_cheapest_path_beats_direct_jump(self):
        result = optimal_plan(chain_model())
        assert result.solvable
        assert result.plan.actions == ("one", "two")
        assert result.plan.cost == 5

    def test_goal_already_satisfied_yields_empty_plan(self):
        m = Model(frozenset({P}), (), frozenset({P}), frozenset({P}))
        result = optimal_plan(m)
        assert result.solvable
        assert result.plan == type(result.plan)((), 0)

    def test_unsolvable_detected_without_expansion(self):
        m = Model(
            frozenset({P, G}),
            (GroundAction("noop", frozenset({P}), frozenset({P}), frozenset(), 1),),
            frozenset(),
            frozenset({G}),
        )
        result = optimal_plan(m)
        assert not result.solvable
        assert result.plan is None
        assert result.expansions == 0

    def test_deterministic_tie_break_prefers_lex_smaller_action(self):
        m = Model(
            frozenset({G}),
            (
                GroundAction("zeta", frozenset(), frozenset({G}), frozenset(), 1),
                GroundAction("alpha", frozenset(), frozenset({G}), frozenset(), 1),
            ),
            frozenset(),
            frozenset({G}),
        )
        for _ in range(3):
            assert optimal_plan(m).plan.actions == ("alpha",)

    def test_repeated_calls_are_identical(self):
        rng = random.Random(11)
        for _ in range(10):
            m = random_model(rng)
            r1, r2 = optimal_plan(m), optimal_plan(m)
            assert r1.solvable == r2.solvable
            assert r1.plan == r2.plan
            assert r1.expansions == r2.expansions

    def test_costs_match_uniform_cost_oracle(self):
        rng = random.Random(12)
        for _ in range(60):
            m = random_model(rng)
            got = optimal_plan(m)
            want = uniform_cost_plan(m)
            if want is None:
                assert not got.solvable
            else:
                assert got.solvable
                assert got.plan.cost == want[0]
                # and the returned plan really achieves that cost
                assert plan_cost(got.plan.actions, m) == want[0]

    def test_node_budget_raises_distinct_error(self):
        rng = random.Random(13)
        m = random_solvable_model(rng)
        if optimal_plan(m).expansions <= 1:
            pytest.skip("instance too small to exceed a unit budget")
        with pytest.raises(BudgetExceededError):
            optimal_plan(m, node_budget=1)

    def test_rover_costs(self, rover_p01, rover_p02):
        assert optimal_plan(rover_p01).plan.cost == 11
        assert optimal_plan(rover_p02).plan.cost == 9

    def test_rover_plan_is_valid(self, rover_p01):
        result = optimal_plan(rover_p01)
        assert validate_plan(result.plan, rover_p01).ok


class TestPlanCost:
    def test_cost_of_valid_plan(self):
        assert plan_cost(("one", "two"), chain_model()) == 5

    def test_infeasible_plan_costs_none(self):
        assert plan_cost(("two",), chain_model()) is None

    def test_goal_not_reached_costs_none(self):
        assert plan_cost(("one",), chain_model()) is None

    def test_empty_plan_only_when_goal_holds(self):
        assert plan_cost((), chain_model()) is None
        m = Model(frozenset({P}), (), frozenset({P}), frozenset({P}))
        assert plan_cost((), m) == 0

    def test_unknown_action_raises(self):
        with pytest.raises(UnknownActionError):
            plan_cost(("teleport",), chain_model())


class TestValidatePlan:
    def test_valid_plan(self):
        result = validate_plan(("one", "two"), chain_model())
        assert result.ok
        assert result.failed_index is None

    def test_precondition_violation_reports_step(self):
        result = validate_plan(("two", "one"), chain_model())
        assert not result.ok
        assert result.failed_index == 0
        assert "two" in result.message

    def test_unreached_goal_reported(self):
        result = validate_plan(("one",), chain_model())
        assert not result.ok
        assert "goal" in result.message.lower()
