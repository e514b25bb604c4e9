"""Shared fixtures: the errand walkthrough pair and the rover instances."""

from __future__ import annotations

from pathlib import Path

import pytest

from pegplan import Fact, GroundAction, Model, ground, load_fixture
from pegplan.pddl import parse_domain, parse_problem

ROOT = Path(__file__).resolve().parent.parent
BENCHMARKS = ROOT / "benchmarks"


def _errand_actions() -> tuple[GroundAction, ...]:
    happy = Fact("happy")
    not_holiday = Fact("not-holiday")
    car_ready = Fact("car-ready")
    is_sunny = Fact("is-sunny")
    return (
        GroundAction("outlet-shopping", frozenset({not_holiday}), frozenset({happy}), frozenset(), 5),
        GroundAction(
            "outlet-shopping-cheap",
            frozenset({not_holiday, car_ready, is_sunny}),
            frozenset({happy}),
            frozenset(),
            1,
        ),
        GroundAction("visit-park", frozenset(), frozenset({happy}), frozenset(), 10),
        GroundAction(
            "visit-park-cheap",
            frozenset({car_ready, is_sunny}),
            frozenset({happy}),
            frozenset(),
            9,
        ),
    )


def errand_robot() -> Model:
    facts = frozenset({Fact("happy"), Fact("not-holiday"), Fact("car-ready"), Fact("is-sunny")})
    return Model(
        facts,
        _errand_actions(),
        frozenset({Fact("car-ready"), Fact("is-sunny")}),
        frozenset({Fact("happy")}),
    )


def errand_human() -> Model:
    facts = frozenset({Fact("happy"), Fact("not-holiday"), Fact("car-ready"), Fact("is-sunny")})
    return Model(
        facts,
        _errand_actions(),
        frozenset({Fact("not-holiday")}),
        frozenset({Fact("happy")}),
    )


@pytest.fixture(scope="session")
def errand_pair() -> tuple[Model, Model]:
    return errand_robot(), errand_human()


@pytest.fixture(scope="session")
def errand_fixture_pair() -> tuple[Model, Model]:
    models = load_fixture(BENCHMARKS / "amy_monica.model")
    return models["robot"], models["human"]


@pytest.fixture(scope="session")
def rover_domain():
    return parse_domain((BENCHMARKS / "rover" / "domain.pddl").read_text())


@pytest.fixture(scope="session")
def rover_p01(rover_domain) -> Model:
    problem = parse_problem((BENCHMARKS / "rover" / "p01.pddl").read_text())
    return ground(rover_domain, problem)


@pytest.fixture(scope="session")
def rover_p02(rover_domain) -> Model:
    problem = parse_problem((BENCHMARKS / "rover" / "p02.pddl").read_text())
    return ground(rover_domain, problem)
