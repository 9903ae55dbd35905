"""Check the two running inequalities on an instrumented run: the
per-iteration surrogate error ceiling and the quasi-descent bound that
the step-size analysis guarantees.
"""

import numpy as np

from ozo.diagnostics import lemma1_check, quasi_descent_check
from ozo.harness import default_x0
from ozo.optimizer import RunConfig, run
from ozo.problems import make_convex_pl
from ozo.samplers import make_rng, sample_haar
from ozo.schedules import AlphaSchedule, HSchedule, ScheduleSpec, derive_constants

problem = make_convex_pl(d=8, n=8, lambda_target=10.0, seed=2)

# pointwise: surrogate projection error vs the lambda * d * h / (2 sqrt(ell)) ceiling
rng = make_rng(7)
x = np.random.default_rng(8).uniform(-2, 2, size=problem.d)
for h in (1e-1, 1e-3, 1e-5):
    P = sample_haar(problem.d, 3, rng)
    rep = lemma1_check(problem.value, x, P, h,
                       analytic_grad=problem.gradient(x), lam=problem.lam)
    print(f"h={h:<8g} error {rep.lhs[0]:.3e} <= ceiling {rep.rhs[0]:.3e}  "
          f"({'ok' if rep.violations == 0 else 'VIOLATED'})")

# trajectory-wise: run with diagnostics on, then audit every iteration
ell = 2
alpha = 0.9 * ell / (problem.d * problem.lam)
cons = derive_constants(problem.lam, problem.gamma, problem.d, ell, alpha)
record = run(RunConfig(
    problem=problem, ell=ell,
    schedule=ScheduleSpec(AlphaSchedule("constant", alpha),
                          HSchedule("constant", 1e-3)),
    budget=601, x0=default_x0(problem, make_rng(7, 0)),
    seed=(7, 1, 0, 0), diagnostics=True,
))
descent, corollary = quasi_descent_check(record, cons)
for rep in (descent, corollary):
    print(f"{rep.name:16s} {rep.lhs.size} iterations, "
          f"{rep.violations} violations, worst margin {rep.worst:+.3e}")
