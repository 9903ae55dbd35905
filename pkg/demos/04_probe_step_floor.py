"""Show the h^2 error floor: with a constant probe step the run contracts
geometrically until it parks on a plateau, and shrinking h by 10x drops
the plateau by about 100x without changing the contraction rate.
"""

import numpy as np

from ozo.harness import default_x0
from ozo.optimizer import RunConfig, run
from ozo.problems import make_convex_pl
from ozo.samplers import make_rng
from ozo.schedules import AlphaSchedule, HSchedule, ScheduleSpec, derive_constants
from ozo.diagnostics import error_region_bound

problem = make_convex_pl(d=5, n=10, lambda_target=4.0, seed=7)
ell = 1
alpha = ell / (problem.d * problem.lam)
cons = derive_constants(problem.lam, problem.gamma, problem.d, ell, alpha)
x0 = default_x0(problem, make_rng(99, 0))

print(f"{'h':>8} {'plateau':>12} {'bound':>12} {'ratio to next':>14}")
plateaus = []
for h in (1e-1, 1e-2, 1e-3):
    reps = []
    for rep in range(20):
        rec = run(RunConfig(
            problem=problem, ell=ell,
            schedule=ScheduleSpec(AlphaSchedule("constant", alpha),
                                  HSchedule("constant", h)),
            budget=6001, x0=x0, seed=(99, 1, 0, rep),
        ))
        reps.append(rec.f)
    mean = np.mean(reps, axis=0)
    plateau = float(np.mean(mean[-600:]))
    plateaus.append(plateau)
    bound = error_region_bound(cons, alpha, h)
    ratio = "" if len(plateaus) < 2 else f"{plateaus[-2] / plateau:14.1f}"
    print(f"{h:>8g} {plateau:>12.4e} {bound:>12.4e} {ratio}")
