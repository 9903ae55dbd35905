"""Reproducible test objectives with analytic gradients and exact constants.

Two families, both with f* = 0 attained at the origin and a rank-deficient
quadratic part (PL but not strongly convex):

* ``make_convex_pl``:    f(x) = ||A x||^2
* ``make_nonconvex_pl``: f(x) = ||A x||^2 + 3 sin^2(c^T x), with A c = c

Instances are immutable and safe to share across parallel runs.
"""

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import qr_positive_diagonal
from .samplers import make_rng

__all__ = [
    "ProblemInstance",
    "make_convex_pl",
    "make_nonconvex_pl",
    "pl_constant_nonconvex",
    "PLViolationWarning",
]


class PLViolationWarning(UserWarning):
    """The gradient-domination search found an effectively zero ratio."""


@dataclass(frozen=True)
class ProblemInstance:
    """A generated objective with its certified constants.

    ``lam`` is the exact global Lipschitz constant of the gradient; ``gamma``
    is a valid PL constant (exact for the convex family, a derived lower
    bound for the nonconvex one). ``gamma_source`` records which.
    """

    kind: str                      # "convex-pl" | "nonconvex-pl"
    d: int
    n: int
    A: np.ndarray                  # (n, d)
    c: Optional[np.ndarray]        # (d,) for the nonconvex family, else None
    lam: float
    gamma: float
    seed: int
    f_star: float = 0.0
    gamma_source: str = "exact"
    _M: np.ndarray = field(default=None, repr=False)   # A^T A, cached

    def value(self, x):
        r = self.A @ x
        v = float(r @ r)
        if self.c is not None:
            v += 3.0 * float(np.sin(self.c @ x)) ** 2
        return v

    def gradient(self, x):
        g = 2.0 * (self._M @ x)
        if self.c is not None:
            g = g + 3.0 * np.sin(2.0 * float(self.c @ x)) * self.c
        return g


def make_convex_pl(d, n, lambda_target, rank_deficiency=1, seed=0):
    """Random rank-deficient quadratic f(x) = ||A x||^2 with exact constants.

    A comes from the SVD of an iid Gaussian (n, d) matrix: the smallest
    ``rank_deficiency`` singular values are zeroed (so f is PL but not
    strongly convex) and the spectrum is rescaled so that the gradient
    Lipschitz constant 2*sigma_max(A)^2 equals ``lambda_target`` exactly.
    gamma = 4 * (smallest nonzero eigenvalue of A^T A).
    """
    if lambda_target <= 0:
        raise ValueError("lambda_target must be positive")
    m = min(n, d)
    if not 1 <= rank_deficiency < m:
        raise ValueError(f"need 1 <= rank_deficiency < min(n, d) = {m}")
    rng = make_rng(seed)
    G = rng.standard_normal((n, d))
    U, s, Vt = np.linalg.svd(G, full_matrices=False)
    s[m - rank_deficiency:] = 0.0
    s *= np.sqrt(lambda_target / 2.0) / s[0]
    A = (U * s) @ Vt
    gamma = 4.0 * float(s[m - rank_deficiency - 1] ** 2)
    return ProblemInstance(
        kind="convex-pl", d=d, n=n, A=A, c=None,
        lam=float(lambda_target), gamma=gamma, seed=seed,
        _M=(Vt.T * s**2) @ Vt,
    )


def _sine_direction_pl_inf(kappa, t_max=40.0, points=400_000):
    """Infimum of phi'(t)^2 / phi(t) for phi(t) = t^2 + 3 sin^2(kappa t).

    phi is even and for t > t_max the ratio is already above its small-t
    dips, so a dense grid on (0, t_max] brackets the infimum; a small safety
    margin covers grid resolution. The limits are 4(1 + 3 kappa^2) at 0+ and
    4 at infinity.
    """
    t = np.linspace(1e-9, t_max, points)
    phi = t**2 + 3.0 * np.sin(kappa * t) ** 2
    dphi = 2.0 * t + 3.0 * kappa * np.sin(2.0 * kappa * t)
    ratio = dphi**2 / phi
    lo = min(float(ratio.min()), 4.0)
    return lo * (1.0 - 1e-3)


def make_nonconvex_pl(d, n=None, lambda_target=100.0, seed=0):
    """Nonconvex PL objective f(x) = ||A x||^2 + 3 sin^2(c^T x) with A c = c.

    A is symmetric, built on a random orthonormal basis with eigenvalue 1
    along the direction of c, one zero eigenvalue, and interior eigenvalues
    below 1. The scale kappa = ||c|| is capped at 1, which keeps the
    objective globally gradient-dominated (larger kappa creates spurious
    critical points along c); lambda_target beyond the sine term's reach
    (2 + 6 kappa^2 <= 8) is met by one interior eigenvalue sqrt(lambda/2).

    Requires n == d. gamma is a derived lower bound: the construction is
    separable in the eigenbasis, so gamma = min over directions of the
    per-direction PL constants.
    """
    if n is None:
        n = d
    if n != d:
        raise ValueError("the eigenvector condition A c = c needs n == d")
    if lambda_target <= 2.0:
        raise ValueError(
            f"lambda_target={lambda_target:g} infeasible: the sine term plus the "
            "unit eigenvalue direction already has curvature above 2"
        )
    needs_interior = lambda_target > 8.0
    if needs_interior and d < 3:
        raise ValueError("lambda_target > 8 needs d >= 3 (an interior eigendirection)")
    kappa = min(1.0, np.sqrt((lambda_target - 2.0) / 6.0))
    rng = make_rng(seed)
    if d == 1:
        U = np.array([[1.0]])
        eigs = np.array([1.0])
    else:
        U, _ = qr_positive_diagonal(rng.standard_normal((d, d)))
        eigs = np.zeros(d)
        eigs[0] = 1.0
        if d > 2:
            eigs[1:-1] = rng.uniform(0.3, 0.9, size=d - 2)
        if needs_interior:
            eigs[1] = np.sqrt(lambda_target / 2.0)
    A = (U * eigs) @ U.T
    A = 0.5 * (A + A.T)  # kill rounding asymmetry
    c = kappa * U[:, 0]
    nonzero = eigs[eigs > 0]
    gamma_quad = 4.0 * float(nonzero.min() ** 2) if nonzero.size > 1 else np.inf
    gamma = min(_sine_direction_pl_inf(kappa), gamma_quad)
    return ProblemInstance(
        kind="nonconvex-pl", d=d, n=d, A=A, c=c,
        lam=float(lambda_target), gamma=float(gamma), seed=seed,
        gamma_source="derived", _M=(U * eigs**2) @ U.T,
    )


def pl_constant_nonconvex(instance, seed=0, samples=50_000, refine_rounds=40):
    """Estimate the gradient-domination constant by search over [-10, 10]^d.

    Minimizes ||grad f||^2 / f over the box by dense sampling plus local
    shrinking perturbation, exploiting ratio(x) = ratio(-x). For d <= 5 the
    search is dense enough to act as a certification; beyond that the result
    is an empirical estimate only. Warns (PLViolationWarning) if the ratio
    collapses below 1e-12, which would mean the construction is broken.
    """
    if instance.kind != "nonconvex-pl":
        raise ValueError(f"expected a nonconvex-pl instance, got {instance.kind!r}")
    d = instance.d
    rng = make_rng(seed, 97)

    def ratio(X):
        # rows of X are points; vectorized ratio with 0/0 at the optimum masked
        R = X @ instance.A.T
        cx = X @ instance.c
        f = np.einsum("ij,ij->i", R, R) + 3.0 * np.sin(cx) ** 2
        G = 2.0 * (X @ instance._M.T) + 3.0 * np.sin(2.0 * cx)[:, None] * instance.c[None, :]
        g2 = np.einsum("ij,ij->i", G, G)
        good = f > 1e-14
        out = np.full(X.shape[0], np.inf)
        out[good] = g2[good] / f[good]
        return out

    X = rng.uniform(0.0, 10.0, size=(samples, d))  # half-box by symmetry
    r = ratio(X)
    best = float(r.min())
    x_best = X[int(np.argmin(r))]
    width = 2.0
    for _ in range(refine_rounds):
        cand = x_best + rng.uniform(-width, width, size=(200, d))
        np.clip(cand, -10.0, 10.0, out=cand)
        rc = ratio(cand)
        i = int(np.argmin(rc))
        if rc[i] < best:
            best = float(rc[i])
            x_best = cand[i]
        width *= 0.8
    if best < 1e-12:
        warnings.warn(
            "gradient-domination ratio collapsed below 1e-12: the instance is "
            "effectively not PL", PLViolationWarning,
        )
    return best
