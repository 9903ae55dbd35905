"""Random direction matrices P in R^{d x ell} with exactly orthogonal columns
of squared norm d/ell and isotropic second moment E[P P^T] = I.

Three families: signed random coordinate blocks, Haar-distributed orthonormal
columns, and a sign-randomized subsampled Hadamard transform. All three keep
P^T P = (d/ell) I to rounding error on every single draw; the isotropy holds
in expectation only.
"""

import numpy as np

from .linalg import DegenerateMatrixError, fwht, is_power_of_two, qr_positive_diagonal

__all__ = [
    "sample_coordinate",
    "sample_haar",
    "sample_hadamard",
    "Sampler",
    "make_rng",
    "SAMPLER_TAGS",
]

SAMPLER_TAGS = ("coordinate", "haar", "hadamard")

_HAAR_ATTEMPTS = 3


def make_rng(master_seed, *stream):
    """Independent Philox stream derived from (master seed, stream key).

    Streams are keyed, not drawn sequentially, so adding or removing one
    replicate never perturbs another.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def _check_dims(d, ell):
    if ell < 1 or ell > d:
        raise ValueError(f"need 1 <= ell <= d, got ell={ell}, d={d}")


def sample_coordinate(d, ell, rng, signed=True):
    """ell distinct signed coordinate directions, scaled to squared norm d/ell.

    Columns are sqrt(d/ell) * sigma_j * e_{i_j} with indices drawn uniformly
    without replacement (Fisher-Yates via permutation) and independent signs.
    ``signed=False`` drops the sign flips (ablation switch; the column
    assumptions hold either way).
    """
    _check_dims(d, ell)
    idx = rng.permutation(d)[:ell]
    scale = np.sqrt(d / ell)
    if signed:
        signs = rng.integers(0, 2, size=ell) * 2.0 - 1.0
    else:
        signs = np.ones(ell)
    P = np.zeros((d, ell))
    P[idx, np.arange(ell)] = scale * signs
    return P


def sample_haar(d, ell, rng):
    """First ell columns of a Haar orthogonal matrix, scaled by sqrt(d/ell).

    Q comes from the positive-diagonal QR of an iid N(0,1) matrix; the sign
    convention is what makes Q exactly Haar. Rank-deficient draws (a
    probability-zero event, reachable only through pathological generators)
    are resampled up to 3 times.
    """
    _check_dims(d, ell)
    for _ in range(_HAAR_ATTEMPTS):
        Z = rng.standard_normal((d, d))
        try:
            Q, _ = qr_positive_diagonal(Z)
        except DegenerateMatrixError:
            continue
        return np.sqrt(d / ell) * Q[:, :ell]
    raise RuntimeError("Gaussian QR draw degenerate 3 times in a row")


def sample_hadamard(d, ell, rng):
    """Subsampled randomized Hadamard directions: sqrt(d/ell) * D (H/sqrt(d)) S.

    D is a fresh diagonal of iid signs, S selects ell distinct columns of the
    identity. Each selected column e_i is transformed with the fast
    Walsh-Hadamard butterfly, so the cost is O(ell * d log d). Requires d to
    be a power of 2.
    """
    _check_dims(d, ell)
    if not is_power_of_two(d):
        raise ValueError(f"hadamard sampler needs d a power of 2, got d={d}")
    signs = rng.integers(0, 2, size=d) * 2.0 - 1.0
    idx = rng.permutation(d)[:ell]
    scale = np.sqrt(d / ell) / np.sqrt(d)
    P = np.empty((d, ell))
    for j, i in enumerate(idx):
        e = np.zeros(d)
        e[i] = 1.0
        P[:, j] = scale * signs * fwht(e)
    return P


class Sampler:
    """A direction sampler bound to (d, ell) with its own RNG stream.

    One instance per run; instances are not shared across threads.
    """

    def __init__(self, tag, d, ell, rng, coordinate_signed=True):
        if tag not in SAMPLER_TAGS:
            raise ValueError(f"unknown sampler tag {tag!r}, expected one of {SAMPLER_TAGS}")
        if tag == "hadamard" and not is_power_of_two(d):
            raise ValueError(f"hadamard sampler needs d a power of 2, got d={d}")
        _check_dims(d, ell)
        self.tag = tag
        self.d = d
        self.ell = ell
        self.rng = rng
        self.coordinate_signed = coordinate_signed

    def sample(self):
        if self.tag == "coordinate":
            return sample_coordinate(self.d, self.ell, self.rng, self.coordinate_signed)
        if self.tag == "haar":
            return sample_haar(self.d, self.ell, self.rng)
        return sample_hadamard(self.d, self.ell, self.rng)
