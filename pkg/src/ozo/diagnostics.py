"""Bound checks and empirical rate fits over recorded traces.

Everything here is post-processing: pure functions of immutable trace data,
reported one-sided with relative tolerance 1e-9.
"""

import math
from dataclasses import dataclass

import numpy as np

from .oracle import projected_gradient, surrogate_gradient

__all__ = [
    "BoundReport",
    "FitResult",
    "lemma1_check",
    "quasi_descent_check",
    "error_region_bound",
    "fit_rate",
]

_REL_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Per-iteration record of an inequality lhs <= rhs.

    A row counts as a violation when lhs > rhs + 1e-9*(1 + |rhs|).
    ``worst`` is the largest relative excess (lhs - rhs)/(1 + |rhs|) over all
    rows, negative when every row has slack.
    """

    name: str
    lhs: np.ndarray
    rhs: np.ndarray
    slack: np.ndarray
    violations: int
    worst: float

    @classmethod
    def from_rows(cls, name, lhs, rhs):
        lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        if lhs.shape != rhs.shape or lhs.size == 0:
            raise ValueError("lhs and rhs must be equal-length, non-empty")
        tol = _REL_TOL * (1.0 + np.abs(rhs))
        rel = (lhs - rhs) / (1.0 + np.abs(rhs))
        return cls(
            name=name, lhs=lhs, rhs=rhs, slack=rhs - lhs,
            violations=int(np.count_nonzero(lhs > rhs + tol)),
            worst=float(rel.max()),
        )

    @property
    def ok(self):
        return self.violations == 0

    def summary_dict(self):
        return {
            "name": self.name,
            "rows": int(self.lhs.size),
            "violations": self.violations,
            "worst_relative_violation": self.worst,
        }


def lemma1_check(f, x, P, h, analytic_grad, lam):
    """Surrogate-vs-projected-gradient distance against its a.s. ceiling.

    lhs = ||surrogate(x, P, h) - P^T grad||, rhs = lam*d*h/(2*sqrt(ell)).
    ``analytic_grad`` is the exact gradient at x; ``f`` is the plain
    evaluation callable (calls here are diagnostic, not budgeted).
    """
    d, ell = P.shape
    g_fd = surrogate_gradient(f, x, P, h)
    g_proj = projected_gradient(np.asarray(analytic_grad, dtype=float), P)
    lhs = float(np.linalg.norm(g_fd - g_proj))
    rhs = lam * d * h / (2.0 * math.sqrt(ell))
    return BoundReport.from_rows("surrogate-error", [lhs], [rhs])


def quasi_descent_check(record, constants):
    """Recompute the per-iteration decrease bound from a diagnostic trace.

    Returns (descent, corollary): the full inequality
    f_{k+1} - f_k <= -(w*alpha_k/2)*||P_k^T grad f_k||^2 + C*alpha_k*h_k^2
    and its weaker h-only corollary f_{k+1} - f_k <= C*alpha_k*h_k^2. The
    rhs is rebuilt here from the pg_norm2 side channel and the supplied
    constants, independently of any qd columns the run may have stored.
    """
    if record.pg_norm2 is None:
        raise ValueError("trace was recorded without diagnostics; pg_norm2 missing")
    if record.k.size < 2:
        raise ValueError("need at least one iteration beyond the initial point")
    f = record.f
    alpha = record.alpha[1:]
    h = record.h[1:]
    pg2 = record.pg_norm2[1:]
    lhs = f[1:] - f[:-1]
    err = constants.C * alpha * h**2
    rhs = -0.5 * constants.w * alpha * pg2 + err
    return (
        BoundReport.from_rows("quasi-descent", lhs, rhs),
        BoundReport.from_rows("quasi-descent-corollary", lhs, err),
    )


def error_region_bound(constants, alpha, h_bar):
    """Asymptotic value floor 2*C*alpha_bar*h_bar^2 / (w*alpha*gamma).

    ``alpha`` is the running lower bound of the step sequence (the constant
    value for constant laws). Zero h_bar means no floor.
    """
    if constants.gamma is None:
        raise ValueError("error region needs a PL constant; this problem has none")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if h_bar < 0:
        raise ValueError("h_bar must be nonnegative")
    return 2.0 * constants.C * constants.alpha_bar * h_bar**2 / (
        constants.w * alpha * constants.gamma
    )


@dataclass(frozen=True)
class FitResult:
    """Least-squares rate fit over the tail of a trace.

    ``value`` is the log-log slope for the power model and the per-iteration
    contraction factor for linear_log. ``truncated`` flags that rows at or
    below the rounding floor were dropped before windowing.
    """

    model: str
    value: float
    r2: float
    k_lo: int
    k_hi: int
    truncated: bool


def fit_rate(k, gap, model="power", f0=None):
    """Fit log(gap) against log k ("power") or k ("linear_log").

    The window is the tail half of usable iterations, where usable means
    k >= 1 and gap above 1e2*eps*|f0| (the rounding floor, not mathematics).
    """
    if model not in ("power", "linear_log"):
        raise ValueError(f"model must be 'power' or 'linear_log', got {model!r}")
    k = np.asarray(k, dtype=float)
    gap = np.asarray(gap, dtype=float)
    if k.shape != gap.shape:
        raise ValueError("k and gap must have equal length")
    if f0 is None:
        f0 = gap[0] if gap.size else 0.0
    floor = 100.0 * np.finfo(float).eps * abs(f0)
    usable = (k >= 1) & (gap > floor)
    truncated = bool(np.any((k >= 1) & ~usable))
    idx = np.flatnonzero(usable)
    idx = idx[idx.size // 2:]
    if idx.size < 2:
        raise ValueError("fewer than two usable points above the rounding floor")
    kw, gw = k[idx], gap[idx]
    X = np.log(kw) if model == "power" else kw
    Y = np.log(gw)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    ss_res = float(resid @ resid)
    # variance at rounding scale means a constant series: a perfect fit,
    # not an undefined one
    eps2 = (np.finfo(float).eps * max(1.0, float(np.max(np.abs(Y))))) ** 2
    r2 = 1.0 if ss_tot <= 10.0 * Y.size * eps2 else 1.0 - ss_res / ss_tot
    value = float(slope) if model == "power" else float(math.exp(slope))
    return FitResult(model=model, value=value, r2=float(r2),
                     k_lo=int(kw[0]), k_hi=int(kw[-1]), truncated=truncated)
