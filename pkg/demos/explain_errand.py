"""Progressive vs concise explanations on the weekend-errand pair.

The interesting bit: every complete explanation here contains the same
three changes, so the only freedom is their order — and order is
exactly what the progressive search optimizes.

Run:  python3 demos/explain_errand.py
"""

from pathlib import Path

from pegplan import (
    MetricKind,
    ReconciliationProblem,
    generate_concise,
    generate_progressive,
    load_fixture,
)

FIXTURE = Path(__file__).resolve().parent.parent / "benchmarks" / "amy_monica.model"


def show(trace) -> None:
    print(f"  [{trace.mode}/{trace.metric.value}] size {trace.size}, "
          f"total effort {trace.sum_rho}, complete {trace.complete}")
    for step in trace.steps:
        if step.change is None:
            print(f"    step 0: cost* = {step.cost_star}")
        else:
            print(f"    step {step.index}: {step.change.render():32s} "
                  f"cost* = {step.cost_star:2d}  effort {step.rho}")


def main() -> None:
    models = load_fixture(FIXTURE)
    problem = ReconciliationProblem(models["robot"], models["human"])

    plan = problem.robot_plan
    print(f"plan to explain: {' '.join(plan.actions)} at cost {plan.cost}\n")

    print("== progressive, one trace per effort metric ==")
    for metric in MetricKind:
        show(generate_progressive(problem, metric=metric))

    print("\n== concise (minimum count, order not optimized) ==")
    show(generate_concise(problem))


if __name__ == "__main__":
    main()
