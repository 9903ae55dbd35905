"""Dense linear-algebra primitives: sign-fixed QR, fast Walsh-Hadamard
transform, and symmetric eigen-decomposition.

Matrices are plain float64 ``numpy.ndarray`` values (row-major, dense); all
functions are pure.
"""

import numpy as np

__all__ = [
    "DegenerateMatrixError",
    "qr_positive_diagonal",
    "fwht",
    "sym_eig",
    "is_power_of_two",
]

# R diagonal below this multiple of max|Z| counts as rank deficiency.
_RANK_TOL = 1e-12


class DegenerateMatrixError(ValueError):
    """Raised when a factorization meets effectively rank-deficient input."""


def is_power_of_two(d):
    return d >= 1 and (d & (d - 1)) == 0


def qr_positive_diagonal(Z):
    """QR factorization of a square matrix with R's diagonal forced positive.

    The sign convention (flip any row of R with a negative pivot, and the
    matching column of Q) is what makes Q exactly Haar-distributed when Z has
    iid standard normal entries.

    Parameters
    ----------
    Z : (d, d) array_like
    Returns
    -------
    Q, R : ndarray
        Z = Q R with orthonormal Q and upper-triangular R, R[i, i] > 0.

    Raises
    ------
    DegenerateMatrixError
        If any diagonal entry of R falls below 1e-12 * max|Z|; callers that
        feed random input are expected to resample.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Z.shape}")
    Q, R = np.linalg.qr(Z)  # LAPACK Householder
    diag = np.diagonal(R)
    scale = np.abs(Z).max()
    if np.any(np.abs(diag) <= _RANK_TOL * scale):
        raise DegenerateMatrixError(
            "input is numerically rank deficient (|R_ii| <= 1e-12 * max|Z|)"
        )
    signs = np.sign(diag)
    return Q * signs, R * signs[:, None]


def fwht(v):
    """Multiply the unnormalized Sylvester-Hadamard matrix H_d into v.

    In-place butterfly, O(d log d). Since H**2 = d*I, ``fwht(fwht(v))``
    returns ``d * v``.
    """
    v = np.asarray(v, dtype=float)
    d = v.shape[0]
    if not is_power_of_two(d):
        raise ValueError(f"fwht needs a power-of-2 length, got {d}")
    out = v.copy()
    half = 1
    while half < d:
        out = out.reshape(-1, 2 * half)
        a = out[:, :half].copy()
        b = out[:, half:]
        out[:, :half] = a + b
        out[:, half:] = a - b
        half *= 2
    return out.reshape(d)


def sym_eig(M, tol=1e-10):
    """Eigen-decomposition of a symmetric matrix, eigenvalues descending.

    Raises ValueError if M is asymmetric beyond ``tol`` relative.
    """
    M = np.asarray(M, dtype=float)
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.T).max() > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    vals, vecs = np.linalg.eigh(M)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]
