"""Step-size and discretization schedules, derived constants, and the
theorem-regime classifier.

Iterations are counted from k = 1: decay laws like h/k^r are undefined at 0,
so the first update of a run always evaluates the schedules at k = 1.
"""

import math
from dataclasses import dataclass
from typing import Optional

__all__ = [
    "AlphaSchedule",
    "HSchedule",
    "ScheduleSpec",
    "RegimeConstants",
    "InfeasibleStepsizeError",
    "derive_constants",
    "stopping_rule_pl",
    "classify_regime",
    "REGIME_LABELS",
]

REGIME_LABELS = (
    "T1-i", "T1-ii", "T1-iii", "T1-iv",
    "T2-i'", "T2-ii'", "T2-iii'", "T2-iv'",
    "unclassified",
)


class InfeasibleStepsizeError(ValueError):
    pass


@dataclass(frozen=True)
class AlphaSchedule:
    """Step-size law: "constant" -> alpha, "power" -> alpha / k^s."""

    law: str
    alpha: float
    s: float = 0.0

    def __post_init__(self):
        if self.law not in ("constant", "power"):
            raise ValueError(f"unknown alpha law {self.law!r}")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.law == "power" and self.s < 0:
            raise ValueError("power-law exponent s must be >= 0")

    def at(self, k):
        if k < 1:
            raise ValueError(f"iteration index starts at 1, got {k}")
        if self.law == "constant":
            return self.alpha
        return self.alpha / k**self.s

    def bound(self):
        """Supremum over k >= 1 (the alpha-bar entering the constants)."""
        return self.alpha


@dataclass(frozen=True)
class HSchedule:
    """Discretization law: "constant" -> h, "power" -> h / k^r,
    "expdecay" -> h * sqrt(eta^k / k^r)."""

    law: str
    h: float
    r: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.law not in ("constant", "power", "expdecay"):
            raise ValueError(f"unknown h law {self.law!r}")
        if self.h < 0:
            raise ValueError("h must be nonnegative")
        if self.law in ("power", "expdecay") and self.r <= 0:
            raise ValueError("decay exponent r must be positive")
        if self.law == "expdecay" and not 0 < self.eta < 1:
            raise ValueError("expdecay needs 0 < eta < 1")

    def at(self, k):
        if k < 1:
            raise ValueError(f"iteration index starts at 1, got {k}")
        if self.law == "constant":
            return self.h
        if self.law == "power":
            return self.h / k**self.r
        return self.h * math.sqrt(self.eta**k / k**self.r)

    def bound(self):
        """Supremum over k >= 1 (the h-bar entering the error bounds)."""
        if self.law == "expdecay":
            return self.h * math.sqrt(self.eta)
        return self.h


@dataclass(frozen=True)
class ScheduleSpec:
    alpha: AlphaSchedule
    h: HSchedule

    def alpha_at(self, k):
        return self.alpha.at(k)

    def h_at(self, k):
        return self.h.at(k)


@dataclass(frozen=True)
class RegimeConstants:
    """Constants governing admissible steps and the provable decrease.

    Lambda = lam * d / ell is the effective Lipschitz constant; steps must
    stay below 2/Lambda. C bounds the per-iteration discretization error
    C * alpha_k * h_k^2; eta is the PL contraction factor (None without a PL
    constant).
    """

    lam: float
    gamma: Optional[float]
    d: int
    ell: int
    alpha_bar: float
    Lambda: float
    w: float
    C: float
    eta: Optional[float]

    @property
    def c1(self):
        """Residual constant of the linear-rate bound: C * alpha_bar / (1 - eta)."""
        if self.eta is None:
            raise ValueError("c1 needs a PL constant (gamma was not provided)")
        return self.C * self.alpha_bar / (1.0 - self.eta)


def derive_constants(lam, gamma, d, ell, alpha_bar, w=None):
    """Compute (Lambda, w, C, eta) for a problem/schedule pairing.

    Parameters
    ----------
    lam : float
        Gradient Lipschitz constant of the objective.
    gamma : float or None
        PL constant; None when only the convex-regime constants are needed.
    d, ell : int
    alpha_bar : float
        Upper bound of the step-size sequence (the constant value for
        constant laws).
    w : float, optional
        Override for the auxiliary constant. Default: 1 when
        alpha_bar <= 1/Lambda (the regime where C sharpens to l*Lambda^2/8),
        else the midpoint (2 - Lambda*alpha_bar)/2 of the admissible
        interval.

    Raises
    ------
    InfeasibleStepsizeError
        If alpha_bar >= 2/Lambda (no admissible w exists).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if ell < 1 or ell > d:
        raise ValueError(f"need 1 <= ell <= d, got ell={ell}, d={d}")
    Lambda = lam * d / ell
    limit = 2.0 / Lambda
    if alpha_bar <= 0 or alpha_bar >= limit:
        raise InfeasibleStepsizeError(
            f"step bound alpha_bar={alpha_bar:g} outside (0, 2/Lambda) = (0, {limit:g})"
        )
    room = 2.0 - Lambda * alpha_bar  # > 0 by the check above
    simple = alpha_bar <= 1.0 / Lambda
    if w is None:
        w = 1.0 if simple else room / 2.0
    if not 0 < w <= 1:
        raise ValueError(f"w={w:g} violates 0 < w <= 1")
    if w >= room and not (simple and w == 1.0):
        raise ValueError(f"w={w:g} violates w < 2 - Lambda*alpha_bar = {room:g}")
    if simple and w == 1.0:
        # Small-step regime: the per-iteration error constant sharpens to
        # l*Lambda^2/8 and the general min() form (degenerate at the
        # alpha_bar = 1/Lambda boundary) is bypassed.
        C = ell * Lambda**2 / 8.0
    else:
        C = ell * Lambda**2 / (8.0 * min(1.0, room - w))
    eta = None
    if gamma is not None:
        if gamma <= 0:
            raise ValueError("gamma must be positive when provided")
        eta = 1.0 - w * alpha_bar * gamma / 2.0
    return RegimeConstants(
        lam=lam, gamma=gamma, d=d, ell=ell, alpha_bar=alpha_bar,
        Lambda=Lambda, w=w, C=C, eta=eta,
    )


def stopping_rule_pl(epsilon, f0_gap, C1, eta):
    """Iteration count and discretization bound hitting a target gap.

    Returns (K, h_bar) with K = ceil(ln(eps/(f0_gap + C1)) / ln(eta)) and
    h_bar = eta^(K/2): running K iterations with any h <= h_bar drives the
    expected gap below epsilon under the PL linear-rate bound.
    """
    if not 0 < eta < 1:
        raise InfeasibleStepsizeError(f"need 0 < eta < 1 for a PL contraction, got {eta}")
    total = f0_gap + C1
    if not 0 < epsilon <= total:
        raise ValueError(f"epsilon must lie in (0, f0_gap + C1] = (0, {total:g}]")
    K = max(0, math.ceil(math.log(epsilon / total) / math.log(eta)))
    return K, eta ** (K / 2.0)


def classify_regime(spec, constants, mode="fd"):
    """Map a schedule + constants pairing onto the theorem regime it satisfies.

    Conditions transcribe the theorem hypotheses literally; pairs outside
    every hypothesis return "unclassified". The label is advisory and never
    blocks a run.
    """
    if mode not in ("fd", "exact"):
        raise ValueError(f"mode must be 'fd' or 'exact', got {mode!r}")
    al, hl = spec.alpha, spec.h
    Lambda = constants.Lambda
    pl = constants.gamma is not None
    const_alpha = al.law == "constant"
    inside_two = const_alpha and al.alpha < 2.0 / Lambda
    inside_one = const_alpha and al.alpha < 1.0 / Lambda

    if mode == "exact":
        if inside_two:
            return "T2-iv'" if pl else "T1-iv"
        return "unclassified"

    if pl:
        if not inside_two:
            return "unclassified"
        if hl.law == "expdecay" and hl.r > 1 and constants.eta is not None \
                and hl.eta <= constants.eta * (1 + 1e-9):
            return "T2-iii'"
        if hl.law == "power":
            return "T2-ii'"
        if hl.law == "constant":
            return "T2-i'"
        return "unclassified"

    if hl.law == "power" and hl.r > 1 and inside_one:
        return "T1-iii"
    if hl.law == "power" and al.law == "power" and al.s == 1 and al.alpha < 1.0 / Lambda:
        return "T1-ii"
    if inside_one:
        return "T1-i"  # any bounded h sequence qualifies
    return "unclassified"
