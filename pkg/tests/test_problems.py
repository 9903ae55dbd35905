"""Generated objectives: exact Lipschitz constants, PL constants, the
eigenvector constraint of the nonconvex family, and gradient correctness."""

import numpy as np
import pytest

from ozo.problems import (
    PLViolationWarning,
    ProblemInstance,
    make_convex_pl,
    make_nonconvex_pl,
    pl_constant_nonconvex,
)

from oracles import central_diff_gradient


def test_convex_rank_one_closed_form():
    # d=2 with one zeroed singular value: a single-curvature quadratic
    lam = 10.0
    p = make_convex_pl(2, 2, lam, rank_deficiency=1, seed=3)
    s = np.linalg.svd(p.A, compute_uv=False)
    assert s[0] == pytest.approx(np.sqrt(lam / 2.0))
    assert s[1] <= 1e-10
    assert p.gamma == pytest.approx(2.0 * lam)


def test_convex_declared_constants():
    p = make_convex_pl(20, 40, 100.0, seed=1)
    s = np.linalg.svd(p.A, compute_uv=False)
    assert 2.0 * s[0] ** 2 == pytest.approx(p.lam)
    assert s[-1] <= 1e-10  # rank deficient: PL without strong convexity
    nonzero = s[s > 1e-8]
    assert p.gamma == pytest.approx(4.0 * nonzero[-1] ** 2)
    assert p.kind == "convex-pl"
    assert p.f_star == 0.0


@pytest.mark.parametrize(
    "make",
    [
        lambda: make_convex_pl(6, 9, 25.0, rank_deficiency=2, seed=5),
        lambda: make_nonconvex_pl(6, lambda_target=30.0, seed=5),
    ],
)
def test_lipschitz_certification(make):
    p = make()
    rng = np.random.default_rng(17)
    for _ in range(100):
        x, y = rng.uniform(-5, 5, size=(2, p.d))
        dg = np.linalg.norm(p.gradient(x) - p.gradient(y))
        assert dg <= p.lam * np.linalg.norm(x - y) * (1 + 1e-9)


@pytest.mark.parametrize(
    "make",
    [
        lambda: make_convex_pl(6, 9, 25.0, rank_deficiency=2, seed=5),
        lambda: make_nonconvex_pl(6, lambda_target=30.0, seed=5),
    ],
)
def test_pl_certification(make):
    p = make()
    rng = np.random.default_rng(23)
    X = rng.uniform(-5, 5, size=(1000, p.d))
    for x in X:
        g2 = float(p.gradient(x) @ p.gradient(x))
        assert g2 >= p.gamma * (p.value(x) - p.f_star) * (1 - 1e-9)


@pytest.mark.parametrize(
    "make",
    [
        lambda: make_convex_pl(6, 9, 25.0, rank_deficiency=2, seed=5),
        lambda: make_nonconvex_pl(6, lambda_target=30.0, seed=5),
    ],
)
def test_optimum_at_origin(make):
    p = make()
    assert p.value(np.zeros(p.d)) == 0.0
    np.testing.assert_allclose(p.gradient(np.zeros(p.d)), 0.0, atol=1e-14)
    rng = np.random.default_rng(2)
    for _ in range(50):
        assert p.value(rng.uniform(-5, 5, size=p.d)) >= 0.0


@pytest.mark.parametrize(
    "make",
    [
        lambda: make_convex_pl(5, 7, 12.0, seed=9),
        lambda: make_nonconvex_pl(5, lambda_target=12.0, seed=9),
    ],
)
def test_gradient_matches_central_differences(make):
    p = make()
    rng = np.random.default_rng(31)
    for _ in range(20):
        x = rng.uniform(-2, 2, size=p.d)
        num = central_diff_gradient(p.value, x)
        ref = p.gradient(x)
        assert np.linalg.norm(num - ref) <= 1e-5 * (1 + np.linalg.norm(ref))


def test_nonconvex_eigenvector_constraint():
    p = make_nonconvex_pl(8, lambda_target=100.0, seed=4)
    np.testing.assert_allclose(p.A @ p.c, p.c, atol=1e-10)
    assert np.min(np.abs(np.linalg.eigvalsh(p.A))) <= 1e-10
    assert p.gamma_source == "derived"
    assert p.gamma > 0


def test_nonconvex_scalar_instance():
    # d=1 with lambda=8 collapses to f(x) = x^2 + 3 sin^2 x
    p = make_nonconvex_pl(1, lambda_target=8.0, seed=0)
    np.testing.assert_allclose(p.A, [[1.0]])
    np.testing.assert_allclose(p.c, [1.0])
    assert p.value(np.array([np.pi])) == pytest.approx(np.pi**2, abs=1e-12)
    assert p.gradient(np.array([np.pi]))[0] == pytest.approx(2 * np.pi, abs=1e-12)


def test_nonconvex_gamma_search_respects_taylor_limit():
    # ratio -> 16 at the origin for the scalar instance; the search
    # minimizes, so it can only come back at or below that
    p = make_nonconvex_pl(1, lambda_target=8.0, seed=0)
    found = pl_constant_nonconvex(p, samples=20_000, refine_rounds=20)
    assert 0 < found <= 16.0 * (1 + 1e-6)
    assert p.gamma <= found * (1 + 1e-6)


def test_nonconvex_even_symmetry():
    p = make_nonconvex_pl(4, lambda_target=20.0, seed=6)
    rng = np.random.default_rng(40)
    for _ in range(20):
        x = rng.uniform(-5, 5, size=4)
        assert p.value(x) == pytest.approx(p.value(-x), rel=1e-12)
        assert np.linalg.norm(p.gradient(x)) == pytest.approx(
            np.linalg.norm(p.gradient(-x)), rel=1e-9, abs=1e-12
        )


def test_nonconvex_wrong_kind_rejected():
    with pytest.raises(ValueError):
        pl_constant_nonconvex(make_convex_pl(3, 3, 5.0, seed=0))


def test_nonconvex_infeasible_targets():
    with pytest.raises(ValueError):
        make_nonconvex_pl(4, lambda_target=1.5)  # below the sine floor
    with pytest.raises(ValueError):
        make_nonconvex_pl(2, lambda_target=50.0)  # no room for the big eigenvalue
    with pytest.raises(ValueError):
        make_nonconvex_pl(4, n=5, lambda_target=20.0)


def test_convex_parameter_validation():
    with pytest.raises(ValueError):
        make_convex_pl(4, 4, -1.0)
    with pytest.raises(ValueError):
        make_convex_pl(4, 4, 10.0, rank_deficiency=4)


def test_same_seed_same_instance():
    a = make_convex_pl(6, 8, 30.0, seed=12)
    b = make_convex_pl(6, 8, 30.0, seed=12)
    np.testing.assert_array_equal(a.A, b.A)
    c = make_nonconvex_pl(6, lambda_target=30.0, seed=12)
    d = make_nonconvex_pl(6, lambda_target=30.0, seed=12)
    np.testing.assert_array_equal(c.A, d.A)
    np.testing.assert_array_equal(c.c, d.c)


def test_broken_instance_warns():
    # A = 0 and a near-flat sine: f stays positive while the gradient is
    # O(kappa), so the domination ratio is ~kappa^2 everywhere in the box
    kappa = 1e-7
    broken = ProblemInstance(
        kind="nonconvex-pl", d=1, n=1, A=np.zeros((1, 1)), c=np.array([kappa]),
        lam=1.0, gamma=0.1, seed=0, _M=np.zeros((1, 1)),
    )
    with pytest.warns(PLViolationWarning):
        pl_constant_nonconvex(broken, samples=5_000, refine_rounds=10)
