"""Feature calculus on the weekend-errand pair.

Walks the model difference one unit change at a time and shows how the
optimal cost of the believed model drifts toward the planner's model.

Run:  python3 demos/feature_walkthrough.py
"""

from pathlib import Path

from pegplan import apply_change, delta, gamma, load_fixture, optimal_plan

FIXTURE = Path(__file__).resolve().parent.parent / "benchmarks" / "amy_monica.model"


def cost_star(model) -> int:
    result = optimal_plan(model)
    return result.plan.cost if result.solvable else 0


def main() -> None:
    models = load_fixture(FIXTURE)
    robot, human = models["robot"], models["human"]

    print("== features unique to each side ==")
    robot_only = gamma(robot) - gamma(human)
    human_only = gamma(human) - gamma(robot)
    for f in sorted(robot_only, key=lambda f: f.render()):
        print(f"  planner only: {f.render()}")
    for f in sorted(human_only, key=lambda f: f.render()):
        print(f"  believed only: {f.render()}")

    print("\n== walking the difference, removals first ==")
    changes = sorted(
        delta(human, robot), key=lambda c: (c.direction != "remove", c.render())
    )
    model = human
    print(f"  start: cost* = {cost_star(model)}  (believed model)")
    for change in changes:
        model = apply_change(model, change)
        print(f"  {change.render():35s} -> cost* = {cost_star(model)}")
    print(f"  reached the planner's model: {model == robot}")


if __name__ == "__main__":
    main()
