"""Direction-matrix samplers: exact column orthogonality on every draw,
isotropy in expectation, determinism, and the degenerate ell = d cases."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ozo.samplers import (
    SAMPLER_TAGS,
    Sampler,
    make_rng,
    sample_coordinate,
    sample_hadamard,
    sample_haar,
)

_FNS = {
    "coordinate": sample_coordinate,
    "haar": sample_haar,
    "hadamard": sample_hadamard,
}


def _draw(tag, d, ell, seed):
    return _FNS[tag](d, ell, make_rng(seed))


def test_coordinate_columns_are_signed_basis_vectors():
    P = sample_coordinate(4, 2, make_rng(0))
    np.testing.assert_allclose(P.T @ P, 2.0 * np.eye(2), atol=1e-12)
    for j in range(2):
        col = P[:, j]
        nz = np.flatnonzero(col)
        assert nz.size == 1
        assert abs(col[nz[0]]) == pytest.approx(np.sqrt(2.0))
    # distinct rows: sampled without replacement
    assert len({int(np.flatnonzero(P[:, j])[0]) for j in range(2)}) == 2


def test_coordinate_1d_is_a_sign():
    vals = {float(sample_coordinate(1, 1, make_rng(s))[0, 0]) for s in range(32)}
    assert vals == {-1.0, 1.0}


def test_coordinate_full_is_signed_permutation():
    P = sample_coordinate(3, 3, make_rng(4))
    np.testing.assert_array_equal(np.sort(np.abs(P).sum(axis=0)), np.ones(3))
    np.testing.assert_allclose(P @ P.T, np.eye(3), atol=0)


def test_coordinate_unsigned_switch():
    P = sample_coordinate(6, 4, make_rng(2), signed=False)
    assert np.all(P >= 0)
    np.testing.assert_allclose(P.T @ P, 1.5 * np.eye(4), atol=1e-12)


def test_haar_1d_is_a_sign():
    vals = {float(sample_haar(1, 1, make_rng(s))[0, 0]) for s in range(32)}
    assert vals == {-1.0, 1.0}


def test_haar_square_orthonormal():
    P = sample_haar(2, 2, make_rng(1))
    assert np.max(np.abs(P.T @ P - np.eye(2))) <= 1e-10


def test_hadamard_flat_columns():
    P = sample_hadamard(4, 1, make_rng(9))
    np.testing.assert_allclose(np.abs(P[:, 0]), np.ones(4), atol=1e-12)
    assert float(P[:, 0] @ P[:, 0]) == pytest.approx(4.0)


def test_hadamard_square_case():
    P = sample_hadamard(4, 4, make_rng(3))
    np.testing.assert_allclose(P @ P.T, np.eye(4), atol=1e-12)
    P2 = sample_hadamard(2, 2, make_rng(3))
    np.testing.assert_allclose(P2.T @ P2, np.eye(2), atol=1e-12)


@settings(deadline=None, max_examples=60)
@given(
    tag=st.sampled_from(SAMPLER_TAGS),
    d=st.sampled_from([1, 2, 4, 8, 16, 32]),
    seed=st.integers(min_value=0, max_value=2**31),
    data=st.data(),
)
def test_column_orthogonality_every_draw(tag, d, seed, data):
    ell = data.draw(st.integers(min_value=1, max_value=d))
    P = _draw(tag, d, ell, seed)
    assert np.max(np.abs(P.T @ P - (d / ell) * np.eye(ell))) <= 1e-10


@pytest.mark.parametrize("tag", SAMPLER_TAGS)
def test_full_subspace_gives_identity(tag):
    d = 8
    P = _draw(tag, d, d, 77)
    assert np.max(np.abs(P @ P.T - np.eye(d))) <= 1e-10


@pytest.mark.parametrize("tag", SAMPLER_TAGS)
def test_isotropy_monte_carlo_smoke(tag):
    # light version of the statistical gate: mean of P P^T over 4000 draws
    d, ell, n = 8, 3, 4000
    rng = make_rng(123)
    acc = np.zeros((d, d))
    for _ in range(n):
        P = _FNS[tag](d, ell, rng)
        acc += P @ P.T
    assert np.max(np.abs(acc / n - np.eye(d))) < 0.2


@pytest.mark.parametrize("tag", SAMPLER_TAGS)
def test_same_seed_same_sequence(tag):
    a = Sampler(tag, 8, 3, make_rng(6, 1, 0, 0))
    b = Sampler(tag, 8, 3, make_rng(6, 1, 0, 0))
    for _ in range(5):
        np.testing.assert_array_equal(a.sample(), b.sample())


def test_streams_are_keyed_not_sequential():
    # replicate 1's stream is the same whether or not replicate 0 ran
    a = Sampler("coordinate", 8, 3, make_rng(6, 1, 0, 1)).sample()
    _ = Sampler("coordinate", 8, 3, make_rng(6, 1, 0, 0)).sample()
    b = Sampler("coordinate", 8, 3, make_rng(6, 1, 0, 1)).sample()
    np.testing.assert_array_equal(a, b)


def test_dimension_validation():
    rng = make_rng(0)
    with pytest.raises(ValueError):
        sample_coordinate(4, 0, rng)
    with pytest.raises(ValueError):
        sample_haar(4, 5, rng)
    with pytest.raises(ValueError):
        sample_hadamard(12, 1, rng)  # not a power of 2
    with pytest.raises(ValueError):
        Sampler("gauss", 4, 1, rng)
