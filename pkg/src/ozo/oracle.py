"""Blackbox objective wrapper with call counting, the forward-difference
surrogate gradient, and the exact projected gradient."""

import numpy as np

__all__ = [
    "DivergedEvaluationError",
    "Objective",
    "surrogate_gradient",
    "projected_gradient",
]


class DivergedEvaluationError(RuntimeError):
    """A function evaluation returned a non-finite value."""

    def __init__(self, point, value):
        self.point = np.array(point)
        self.value = value
        super().__init__(f"objective returned non-finite value {value!r}")


class Objective:
    """Counting wrapper around an evaluation callable.

    Every call through the wrapper increments ``eval_count`` by exactly one.
    One Objective instance belongs to one run; the counter is how the trace
    gets its fevals axis.
    """

    def __init__(self, fn, dim):
        self.fn = fn
        self.dim = int(dim)
        self.eval_count = 0

    def __call__(self, x):
        self.eval_count += 1
        value = float(self.fn(x))
        if not np.isfinite(value):
            raise DivergedEvaluationError(x, value)
        return value


def surrogate_gradient(f, x, P, h, base=None):
    """Forward finite differences of f along the columns of P.

    Component j is (f(x + h p_j) - f(x)) / h. Costs ell+1 oracle calls, or
    ell when the caller supplies the already-evaluated ``base`` value f(x)
    (one shared base evaluation per iteration).

    Parameters
    ----------
    f : callable
        Typically an Objective; every call is counted.
    x : (d,) ndarray
    P : (d, ell) ndarray
    h : float, > 0
    base : float, optional
        Cached f(x).
    """
    if h <= 0:
        raise ValueError(f"finite-difference step must be positive, got {h}")
    if base is None:
        base = f(x)
    ell = P.shape[1]
    g = np.empty(ell)
    for j in range(ell):
        g[j] = (f(x + h * P[:, j]) - base) / h
    return g


def projected_gradient(grad, P):
    """P^T grad: the limit of the surrogate as h drops to 0."""
    grad = np.asarray(grad)
    if grad.shape[0] != P.shape[0]:
        raise ValueError(
            f"gradient length {grad.shape[0]} does not match direction rows {P.shape[0]}"
        )
    return P.T @ grad
