"""Minimize one random convex quadratic with forward-difference subspace
descent and print the trace head and tail.

The run touches the objective only through function values: each iteration
draws a fresh ell-column frame, probes along its columns with step h, and
moves against the assembled surrogate direction.
"""

import numpy as np

from ozo.optimizer import RunConfig, run
from ozo.problems import make_convex_pl
from ozo.schedules import AlphaSchedule, HSchedule, ScheduleSpec

problem = make_convex_pl(d=20, n=20, lambda_target=100.0, seed=11)
ell = 5
alpha = ell / (problem.d * problem.lam)

record = run(RunConfig(
    problem=problem,
    ell=ell,
    schedule=ScheduleSpec(AlphaSchedule("constant", alpha),
                          HSchedule("constant", 1e-6)),
    budget=3000,
    x0=np.ones(problem.d),
    sampler="haar",
    seed=3,
))

print(f"status {record.status}, {record.k.size - 1} iterations, "
      f"{record.eval_count} evaluations")
print(f"{'k':>6} {'fevals':>7} {'f':>12} {'best_f':>12}")
for i in list(range(3)) + list(range(record.k.size - 3, record.k.size)):
    print(f"{record.k[i]:>6d} {record.fevals[i]:>7d} "
          f"{record.f[i]:>12.5e} {record.best_f[i]:>12.5e}")
print(f"\nreduction factor f_0 / f_final = {record.f[0] / record.f[-1]:.1f}")
