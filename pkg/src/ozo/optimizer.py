"""The main finite-difference descent iteration and its exact-directional
variant, with best-iterate tracking, budgeting, and trace recording.

One run is strictly sequential; replicates parallelize at the harness level,
each with its own objective counter, sampler stream, and trace.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .oracle import DivergedEvaluationError, Objective, projected_gradient, surrogate_gradient
from .samplers import Sampler, make_rng
from .schedules import InfeasibleStepsizeError, ScheduleSpec, derive_constants

__all__ = ["RunConfig", "RunRecord", "DivergenceError", "step_fd", "step_exact", "run"]

_DIVERGENCE_LIMIT = 1e150

TRACE_COLUMNS = ("k", "fevals", "f", "best_f", "alpha", "h")
DIAG_COLUMNS = ("pg_norm2", "qd_lhs", "qd_rhs")


@dataclass
class RunConfig:
    """Everything one run needs.

    ``budget`` counts oracle calls in "fd" mode and iterations in "exact"
    mode. ``fevals_convention`` picks how the per-iterate trace evaluation is
    accounted: "cached" reuses it as the next base without counting it
    (fevals = 1 + k*ell), "paper" counts it (fevals = 1 + k*(ell+1)).
    """

    problem: object
    ell: int
    schedule: ScheduleSpec
    budget: int
    x0: np.ndarray
    sampler: str = "coordinate"
    seed: object = 0                 # int, or tuple key for a derived stream
    mode: str = "fd"                 # "fd" | "exact"
    fevals_convention: str = "cached"
    diagnostics: bool = False
    coordinate_signed: bool = True
    keep_x: bool = False


@dataclass
class RunRecord:
    """Columnar per-iteration trace plus terminal status."""

    k: np.ndarray
    fevals: np.ndarray
    f: np.ndarray
    best_f: np.ndarray
    alpha: np.ndarray
    h: np.ndarray
    status: str
    eval_count: int
    ell: int
    mode: str
    pg_norm2: Optional[np.ndarray] = None
    qd_lhs: Optional[np.ndarray] = None
    qd_rhs: Optional[np.ndarray] = None
    x_final: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def gap(self):
        """f - f* for problems that expose their optimum (all bundled ones do)."""
        return self.f

    def columns(self):
        cols = {name: getattr(self, name) for name in TRACE_COLUMNS}
        if self.pg_norm2 is not None:
            for name in DIAG_COLUMNS:
                cols[name] = getattr(self, name)
        return cols


class DivergenceError(RuntimeError):
    """Iterates or values left the finite range; carries the partial trace."""

    def __init__(self, record, x_last):
        self.record = record
        self.x_last = x_last
        super().__init__(
            f"run diverged at iteration {record.k[-1] if record.k.size else 0} "
            "(step size above the stability limit, or a wrong Lipschitz constant)"
        )


def _rng_for(seed):
    if isinstance(seed, tuple):
        return make_rng(*seed)
    return make_rng(seed)


def step_fd(x, k, objective, sampler, schedule):
    """One finite-difference update x - alpha_k * P * surrogate(x, P, h_k).

    Samples a fresh P, spends exactly ell+1 oracle calls (the base is shared
    across the ell differences), and returns the next iterate.
    """
    alpha = schedule.alpha_at(k)
    h = schedule.h_at(k)
    P = sampler.sample()
    g = surrogate_gradient(objective, x, P, h)
    x_next = x - alpha * (P @ g)
    if not np.all(np.isfinite(x_next)):
        raise DivergenceError(_empty_record(sampler.ell, "fd"), x)
    return x_next


def step_exact(x, k, gradient_fn, sampler, schedule):
    """One exact-directional update x - alpha_k * P P^T grad f(x)."""
    alpha = schedule.alpha_at(k)
    P = sampler.sample()
    g = projected_gradient(gradient_fn(x), P)
    x_next = x - alpha * (P @ g)
    if not np.all(np.isfinite(x_next)):
        raise DivergenceError(_empty_record(sampler.ell, "exact"), x)
    return x_next


def _empty_record(ell, mode):
    z = np.zeros(0)
    return RunRecord(
        k=np.zeros(0, dtype=int), fevals=np.zeros(0, dtype=int), f=z,
        best_f=z, alpha=z, h=z, status="diverged", eval_count=0, ell=ell, mode=mode,
    )


class _Trace:
    def __init__(self, diagnostics):
        self.rows = {name: [] for name in TRACE_COLUMNS}
        self.diag = {name: [] for name in DIAG_COLUMNS} if diagnostics else None

    def add(self, k, fevals, f, best, alpha, h, diag_vals=None):
        r = self.rows
        r["k"].append(k)
        r["fevals"].append(fevals)
        r["f"].append(f)
        r["best_f"].append(best)
        r["alpha"].append(alpha)
        r["h"].append(h)
        if self.diag is not None:
            vals = diag_vals or (np.nan, np.nan, np.nan)
            for name, v in zip(DIAG_COLUMNS, vals):
                self.diag[name].append(v)

    def record(self, status, eval_count, ell, mode, x_final=None):
        kw = {}
        if self.diag is not None:
            kw = {name: np.array(v) for name, v in self.diag.items()}
        return RunRecord(
            k=np.array(self.rows["k"], dtype=int),
            fevals=np.array(self.rows["fevals"], dtype=int),
            f=np.array(self.rows["f"]),
            best_f=np.array(self.rows["best_f"]),
            alpha=np.array(self.rows["alpha"]),
            h=np.array(self.rows["h"]),
            status=status, eval_count=eval_count, ell=ell, mode=mode,
            x_final=x_final, **kw,
        )


def run(config):
    """Drive the iteration to budget exhaustion and return the trace.

    Raises DivergenceError (partial trace attached) if an iterate or value
    leaves the finite range.
    """
    prob = config.problem
    if config.mode not in ("fd", "exact"):
        raise ValueError(f"mode must be 'fd' or 'exact', got {config.mode!r}")
    if config.mode == "fd" and config.budget < config.ell + 1:
        raise ValueError(
            f"budget {config.budget} cannot fund one iteration (needs >= ell+1 = {config.ell + 1})"
        )
    rng = _rng_for(config.seed)
    sampler = Sampler(config.sampler, prob.d, config.ell, rng, config.coordinate_signed)
    x = np.array(config.x0, dtype=float)

    # Constants for the quasi-descent diagnostic columns; schedules outside
    # the admissible range still run (divergence studies), just without them.
    qd = None
    if config.diagnostics:
        try:
            cons = derive_constants(prob.lam, None, prob.d, config.ell,
                                    config.schedule.alpha.bound())
            qd = (cons.w, cons.C)
        except (InfeasibleStepsizeError, ValueError):
            qd = None

    trace = _Trace(config.diagnostics)
    if config.mode == "exact":
        return _run_exact(config, prob, sampler, x, trace, qd)
    return _run_fd(config, prob, sampler, x, trace, qd)


def _diag_vals(prob, x_prev, P, f_prev, f_now, alpha, h, qd):
    grad = prob.gradient(x_prev)
    pg = projected_gradient(grad, P)
    pg2 = float(pg @ pg)
    if qd is None:
        return (pg2, np.nan, np.nan)
    w, C = qd
    return (pg2, f_now - f_prev, -0.5 * w * alpha * pg2 + C * alpha * h * h)


def _run_fd(config, prob, sampler, x, trace, qd):
    obj = Objective(prob.value, prob.d)
    counted_iterate_eval = config.fevals_convention == "paper"
    if config.fevals_convention not in ("cached", "paper"):
        raise ValueError(f"unknown fevals convention {config.fevals_convention!r}")
    per_iter = config.ell + 1 if counted_iterate_eval else config.ell

    try:
        fx = obj(x)
    except DivergedEvaluationError:
        raise DivergenceError(_empty_record(config.ell, "fd"), x) from None
    best = fx
    trace.add(0, obj.eval_count, fx, best, 0.0, 0.0)
    k = 0
    while obj.eval_count + per_iter <= config.budget:
        k += 1
        alpha = config.schedule.alpha_at(k)
        h = config.schedule.h_at(k)
        P = sampler.sample()
        x_prev, f_prev = x, fx
        try:
            g = surrogate_gradient(obj, x, P, h, base=fx)
            x = x - alpha * (P @ g)
            # The trace value at the new iterate doubles as the next base.
            # Under "cached" it bypasses the counter; "paper" recounts it.
            fx = obj(x) if counted_iterate_eval else float(prob.value(x))
        except DivergedEvaluationError:
            raise DivergenceError(
                trace.record("diverged", obj.eval_count, config.ell, "fd"), x_prev
            ) from None
        if not np.isfinite(fx) or abs(fx) > _DIVERGENCE_LIMIT or not np.all(np.isfinite(x)):
            raise DivergenceError(
                trace.record("diverged", obj.eval_count, config.ell, "fd"), x_prev
            )
        best = min(best, fx)
        dv = None
        if config.diagnostics:
            dv = _diag_vals(prob, x_prev, P, f_prev, fx, alpha, h, qd)
        trace.add(k, obj.eval_count, fx, best, alpha, h, dv)
    return trace.record("completed", obj.eval_count, config.ell, "fd",
                        x.copy() if config.keep_x else None)


def _run_exact(config, prob, sampler, x, trace, qd):
    fx = float(prob.value(x))
    best = fx
    trace.add(0, 0, fx, best, 0.0, 0.0)
    for k in range(1, config.budget + 1):
        alpha = config.schedule.alpha_at(k)
        P = sampler.sample()
        x_prev, f_prev = x, fx
        g = projected_gradient(prob.gradient(x), P)
        x = x - alpha * (P @ g)
        fx = float(prob.value(x))
        if not np.isfinite(fx) or abs(fx) > _DIVERGENCE_LIMIT or not np.all(np.isfinite(x)):
            raise DivergenceError(
                trace.record("diverged", 0, config.ell, "exact"), x_prev
            )
        best = min(best, fx)
        dv = None
        if config.diagnostics:
            dv = _diag_vals(prob, x_prev, P, f_prev, fx, alpha, 0.0, qd)
        trace.add(k, k, fx, best, alpha, 0.0, dv)
    return trace.record("completed", 0, config.ell, "exact",
                        x.copy() if config.keep_x else None)
