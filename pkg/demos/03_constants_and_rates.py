"""Derive the convergence constants for a configuration, classify its
rate regime, and size a run for a target accuracy.
"""

from ozo.schedules import (AlphaSchedule, HSchedule, ScheduleSpec,
                           classify_regime, derive_constants, stopping_rule_pl)

lam, gamma, d = 100.0, 0.5, 100

for ell in (1, 10, 100):
    Lambda = lam * d / ell
    cons = derive_constants(lam, gamma, d, ell, alpha_bar=1.0 / Lambda)
    print(f"ell={ell:<4d} Lambda={cons.Lambda:<10.4g} w={cons.w:.3g} "
          f"C={cons.C:<10.4g} eta={cons.eta:.6f}")

# the same constants drive the schedule classifier
ell = 10
cons = derive_constants(lam, gamma, d, ell, alpha_bar=ell / (d * lam))
spec = ScheduleSpec(AlphaSchedule("constant", ell / (d * lam)),
                    HSchedule("expdecay", 1e-2, r=2.0, eta=cons.eta * 0.99))
print(f"\nconstant alpha with fast decaying h classifies as "
      f"{classify_regime(spec, cons)}")

spec2 = ScheduleSpec(AlphaSchedule("constant", ell / (d * lam)),
                     HSchedule("power", 1e-2, r=1.5))
print(f"constant alpha with power-law h classifies as "
      f"{classify_regime(spec2, cons)}")

# iterations needed to push the linear-phase bound below epsilon
K, h_bar = stopping_rule_pl(epsilon=1e-6, f0_gap=50.0, C1=10.0, eta=cons.eta)
print(f"\ntarget 1e-6 from gap 50 + overhead 10: K = {K} iterations, "
      f"h cap {h_bar:.3e}")
