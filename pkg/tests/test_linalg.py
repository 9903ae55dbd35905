"""Dense linear algebra kernels: positive-diagonal QR, the fast
Walsh-Hadamard butterfly, and the symmetric eigensolver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ozo.linalg import (
    DegenerateMatrixError,
    fwht,
    is_power_of_two,
    qr_positive_diagonal,
    sym_eig,
)

from oracles import gram_schmidt_qr, sylvester_hadamard


def test_is_power_of_two():
    assert [d for d in range(1, 20) if is_power_of_two(d)] == [1, 2, 4, 8, 16]
    assert not is_power_of_two(0)


def test_qr_identity():
    Q, R = qr_positive_diagonal(np.eye(2))
    np.testing.assert_allclose(Q, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(R, np.eye(2), atol=1e-14)


def test_qr_permutation_sign_convention():
    # the column swap is orthogonal already; R must come out as +I, not -I
    Z = np.array([[0.0, 1.0], [1.0, 0.0]])
    Q, R = qr_positive_diagonal(Z)
    np.testing.assert_allclose(Q, Z, atol=1e-14)
    np.testing.assert_allclose(R, np.eye(2), atol=1e-14)


def test_qr_scaled_identity():
    Q, R = qr_positive_diagonal(2.0 * np.eye(3))
    np.testing.assert_allclose(Q, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(R, 2.0 * np.eye(3), atol=1e-14)


def test_qr_positive_diagonal_and_reconstruction():
    rng = np.random.default_rng(5)
    for d in (2, 3, 17, 64, 256):
        Z = rng.standard_normal((d, d))
        Q, R = qr_positive_diagonal(Z)
        assert np.all(np.diag(R) > 0)
        assert np.all(np.tril(R, -1) == 0)
        assert np.max(np.abs(Q.T @ Q - np.eye(d))) <= 1e-10
        assert np.max(np.abs(Q @ R - Z)) <= 1e-10 * np.max(np.abs(Z))


def test_qr_matches_gram_schmidt():
    rng = np.random.default_rng(8)
    Z = rng.standard_normal((6, 6))
    Q, R = qr_positive_diagonal(Z)
    Qg, Rg = gram_schmidt_qr(Z)
    # both use the R_ii > 0 convention, so the factors agree, not just Q R
    np.testing.assert_allclose(Q, Qg, atol=1e-9)
    np.testing.assert_allclose(R, Rg, atol=1e-9)


def test_qr_rank_deficient_rejected():
    Z = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(DegenerateMatrixError):
        qr_positive_diagonal(Z)


def test_fwht_hand_values():
    np.testing.assert_array_equal(fwht(np.array([1.0, 0.0])), [1.0, 1.0])
    np.testing.assert_array_equal(fwht(np.array([1.0, 1.0])), [2.0, 0.0])
    e1 = np.zeros(4)
    e1[0] = 1.0
    np.testing.assert_array_equal(fwht(e1), np.ones(4))


@pytest.mark.parametrize("d", [2, 4, 8, 16])
def test_fwht_matches_naive_hadamard(d):
    rng = np.random.default_rng(d)
    v = rng.integers(-5, 6, size=d).astype(float)
    H = sylvester_hadamard(d)
    np.testing.assert_array_equal(fwht(v), H @ v)  # exact on integers


@settings(deadline=None, max_examples=40)
@given(
    logd=st.integers(min_value=1, max_value=7),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_fwht_involution(logd, seed):
    d = 2**logd
    v = np.random.default_rng(seed).standard_normal(d)
    back = fwht(fwht(v))
    assert np.max(np.abs(back - d * v)) <= 1e-10 * max(1.0, np.max(np.abs(d * v)))


def test_fwht_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        fwht(np.ones(3))


def test_sym_eig_hand_values():
    vals, vecs = sym_eig(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(vals, [3.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(np.abs(vecs), np.eye(2), atol=1e-12)

    vals, _ = sym_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(vals, [1.0, -1.0], atol=1e-12)

    vals, _ = sym_eig(np.eye(3))
    np.testing.assert_allclose(vals, np.ones(3), atol=1e-12)


def test_sym_eig_reconstruction_descending():
    rng = np.random.default_rng(3)
    for d in (2, 5, 30):
        B = rng.standard_normal((d, d))
        M = B + B.T
        vals, vecs = sym_eig(M)
        assert np.all(np.diff(vals) <= 1e-12)
        scale = np.max(np.abs(M))
        for i in range(d):
            assert np.max(np.abs(M @ vecs[:, i] - vals[i] * vecs[:, i])) <= 1e-8 * scale
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(d), atol=1e-9)


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(ValueError):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
