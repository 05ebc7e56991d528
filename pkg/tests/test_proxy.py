import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_simplex
from oracles import grid_argmin, power_objective
from smdagg import (DomainError, NumericalError, UnsupportedError, Weights,
                    entropy_conjugate_value, entropy_hessian, entropy_mirror_map, entropy_proxy,
                    entropy_value, euclidean_proxy, generic_mirror_map, make_proxy,
                    performance_ratio, pnorm_proxy, pnorm_value, power_mirror_map, power_proxy,
                    power_value)
from smdagg.checks import fd_gradient
from smdagg.simplex import norm_l1, norm_linf

LN2 = math.log(2)


# -- entropy -------------------------------------------------------------------


@pytest.mark.parametrize("theta, expected", [
    ((0.5, 0.5), 0.0),
    ((1.0, 0.0), LN2),
    ((0.75, 0.25), 0.130812),
])
def test_entropy_value_examples(theta, expected):
    assert entropy_value(Weights(theta)) == pytest.approx(expected, abs=1e-6)


def test_entropy_value_oracle():
    # direct evaluation with explicit 0 ln 0 = 0
    th = np.array([0.75, 0.25])
    assert entropy_value(Weights(th)) == pytest.approx(math.log(2) + 0.75 * math.log(0.75)
                                                       + 0.25 * math.log(0.25), rel=1e-15)


def test_entropy_conjugate_examples():
    assert entropy_conjugate_value(np.zeros(5), 1.7, 2.0, 5) == pytest.approx(0.0, abs=1e-15)
    for c in (-3.0, 0.4, 250.0):
        assert entropy_conjugate_value(np.full(4, c), 0.8, 1.5, 4) == pytest.approx(-1.5 * c)
    assert entropy_conjugate_value(np.array([0.0, math.log(3)]), 1.0, 1.0, 2) == \
        pytest.approx(math.log(2 / 3), abs=1e-6)
    with pytest.raises(DomainError):
        entropy_conjugate_value(np.zeros(2), 0.0, 1.0, 2)


def test_entropy_mirror_map_examples():
    np.testing.assert_allclose(entropy_mirror_map(np.zeros(4), 2.0, 2.0, 4).theta.values, [0.5] * 4)
    for beta in (0.1, 1.0, 37.0):
        th = entropy_mirror_map(np.array([0.0, beta * math.log(3)]), beta, 1.0, 2).theta.values
        np.testing.assert_allclose(th, [0.75, 0.25], rtol=1e-14)
    with pytest.raises(DomainError):
        entropy_mirror_map(np.zeros(2), -1.0, 1.0, 2)


@given(arrays(float, 6, elements=st.floats(-1e3, 1e3)), st.floats(-1e4, 1e4),
       st.floats(0.01, 100))
def test_entropy_mirror_map_shift_invariant(z, c, beta):
    a = entropy_mirror_map(z, beta, 1.0, 6).theta.values
    b = entropy_mirror_map(z + c, beta, 1.0, 6).theta.values
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_entropy_no_overflow_at_large_dual():
    z = np.array([1e8, -1e8, 3.0])
    res = entropy_mirror_map(z, 1e-3, 1.0, 3, with_value=True)
    np.testing.assert_array_equal(res.theta.values, [0.0, 1.0, 0.0])
    assert math.isfinite(res.wvalue)
    assert math.isfinite(entropy_conjugate_value(z, 1e-3, 1.0, 3))


def test_entropy_hessian_examples(rng):
    np.testing.assert_allclose(entropy_hessian(np.zeros(2), 1.0, 1.0, 2),
                               [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)
    for _ in range(100):
        M = int(rng.integers(2, 10))
        Hm = entropy_hessian(rng.normal(scale=3, size=M), rng.uniform(0.1, 5), rng.uniform(0.5, 3), M)
        assert np.max(np.abs(Hm.sum(axis=1))) <= 1e-12
        np.testing.assert_array_equal(Hm, Hm.T)
        assert np.linalg.eigvalsh(Hm).min() >= -1e-12


def test_entropy_hessian_matches_fd_of_mirror_map(rng):
    M, beta, lam = 5, 0.7, 1.3
    z = rng.normal(size=M)
    Hm = entropy_hessian(z, beta, lam, M)
    for j in range(M):
        col = fd_gradient(lambda v: -entropy_mirror_map(v, beta, lam, M).theta.values[j], z,
                          1e-3)
        np.testing.assert_allclose(Hm[j], col, atol=1e-9)


def test_entropy_hessian_bilinear_bound(rng):
    for _ in range(500):
        M = int(rng.integers(2, 10))
        lam, beta = rng.uniform(0.5, 3), rng.uniform(0.1, 5)
        Hm = entropy_hessian(rng.normal(scale=2, size=M), beta, lam, M)
        x, y = rng.choice([-1.0, 1.0], size=(2, M))
        assert x @ Hm @ y <= lam / beta + 1e-9


def test_entropy_gradient_fd():
    from smdagg.checks import check_conjugate_gradient
    ok, detail = check_conjugate_gradient(np.random.default_rng(7))
    assert ok, detail


def test_entropy_conjugacy(rng):
    # z_j = -beta ln theta_j attains the Fenchel-Young equality; any other z is below
    for _ in range(200):
        M = int(rng.integers(2, 10))
        lam, beta = rng.uniform(0.5, 3), rng.uniform(0.1, 5)
        th = Weights(random_simplex(rng, M, lam) + 1e-9, lam, renormalize=True)
        v = entropy_value(th)
        z = -beta * np.log(th.values)
        lhs = -z @ th.values - entropy_conjugate_value(z, beta, lam, M)
        assert lhs == pytest.approx(beta * v, abs=1e-9 * max(1.0, abs(lhs)))
        zr = rng.normal(scale=3, size=M)
        assert -zr @ th.values - entropy_conjugate_value(zr, beta, lam, M) <= beta * v + 1e-9


def test_entropy_strong_convexity_and_minimizer_gap(rng):
    from smdagg.checks import check_minimizer_gap, check_strong_convexity
    for check in (check_strong_convexity, check_minimizer_gap):
        ok, detail = check(rng)
        assert ok, detail


# -- power ------------------------------------------------------------------------


def _power_vertex(lam, M):
    L = math.log(M)
    return lam ** 2 * (1 - math.exp(-1)) * L ** 2 / (L + 1)


@pytest.mark.parametrize("lam, M", [(1.0, 2), (1.0, 16), (2.5, 7)])
def test_power_value_uniform_and_vertex(lam, M):
    assert power_value(Weights.uniform(M, lam)) == pytest.approx(0.0, abs=1e-12)
    assert power_value(Weights.vertex(0, M, lam)) == pytest.approx(_power_vertex(lam, M), rel=1e-12)


def test_power_vertex_number():
    # lam = 1, M = 2: (1 - 1/e) (ln 2)^2 / (ln 2 + 1)
    assert power_value(Weights([1.0, 0.0])) == pytest.approx(0.179373, abs=1e-6)


def test_power_mirror_map_symmetry_and_shift(rng):
    np.testing.assert_allclose(power_mirror_map(np.zeros(5), 1.3, 2.0, 5).theta.values,
                               [0.4] * 5, atol=1e-9)
    for _ in range(20):
        z = rng.normal(size=6)
        a = power_mirror_map(z, 0.9, 1.0, 6).theta.values
        b = power_mirror_map(z + rng.normal() * 50, 0.9, 1.0, 6).theta.values
        np.testing.assert_allclose(a, b, atol=1e-9)


def test_power_mirror_map_grid_oracle(rng):
    M, lam = 4, 1.0
    proxy = power_proxy(lam, M)
    for _ in range(10):
        z, beta = rng.normal(size=M), rng.uniform(0.3, 3)
        oracle = grid_argmin(power_objective(z, beta, lam, M), M, lam)
        assert norm_l1(proxy.mirror_map(z, beta).theta.values - oracle) <= 1e-4


def test_power_mirror_map_nonconvergence_reports():
    with pytest.raises(NumericalError) as info:
        power_mirror_map(np.array([0.0, 1.0, 2.0]), 1.0, 1.0, 3, tol=1e-300, max_iter=5)
    assert "iterations=5" in str(info.value)


def test_power_lipschitz(rng):
    proxy = power_proxy(1.0, 6)
    for _ in range(200):
        z1, z2 = rng.normal(scale=2, size=(2, 6))
        beta = rng.uniform(0.2, 4)
        d = norm_l1(proxy.mirror_map(z1, beta).theta.values - proxy.mirror_map(z2, beta).theta.values)
        assert d <= norm_linf(z1 - z2) / (proxy.alpha * beta) + 1e-8


def _largest_alpha(proxy, rng, n=3000):
    # smallest ratio 2 (s V(x) + (1-s) V(y) - V(mid)) / (s (1-s) |x - y|_1^2);
    # pairs closer than 1e-3 are skipped, their secant gap is below rounding
    lam, M = proxy.lam, proxy.M
    best = math.inf
    for k in range(n):
        conc = 0.05 if k % 2 else 1.0  # half the samples hug the boundary
        x, y = (Weights(lam * rng.dirichlet(np.full(M, conc)), lam, renormalize=True)
                for _ in range(2))
        s = rng.uniform(0.01, 0.99)
        d = norm_l1(x.values - y.values)
        if d < 1e-3:
            continue
        mid = Weights(s * x.values + (1 - s) * y.values, lam, renormalize=True)
        gap = s * proxy.value(x) + (1 - s) * proxy.value(y) - proxy.value(mid)
        best = min(best, 2 * gap / (s * (1 - s) * d * d))
    return best


@pytest.mark.parametrize("M", [2, 4, 16])
def test_power_strong_convexity_estimate(rng, M):
    proxy = power_proxy(1.0, M)
    est = _largest_alpha(proxy, rng)
    print(f"power proxy M={M}: largest sampled alpha {est:.4f}, used {proxy.alpha:.4f}")
    assert est >= proxy.alpha - 1e-9


def test_pnorm_strong_convexity_estimate(rng):
    proxy = pnorm_proxy(1.0, 8)
    assert _largest_alpha(proxy, rng) >= proxy.alpha - 1e-9


# -- p-norm and euclidean --------------------------------------------------------------


def test_pnorm_examples():
    for lam, M in ((1.0, 3), (2.0, 9)):
        assert pnorm_value(Weights.vertex(2, M, lam)) == pytest.approx(0.5, rel=1e-14)
    p = 1 + 1 / LN2
    expected = (2 * 0.5 ** p) ** (2 / p) / 2
    assert pnorm_value(Weights([0.5, 0.5])) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.220487, abs=1e-6)


@given(st.floats(0.1, 10), st.integers(2, 9))
def test_pnorm_homogeneous(c, M):
    th = np.linspace(1, 2, M)
    th /= th.sum()
    assert pnorm_value(Weights(c * th, c, renormalize=True)) == \
        pytest.approx(pnorm_value(Weights(th)), rel=1e-12)


def test_pnorm_rejects_two_dimensions():
    with pytest.raises(DomainError):
        pnorm_proxy(1.0, 2)


def test_euclidean_mirror_map_is_projection():
    proxy = euclidean_proxy(1.0, 3)
    th = proxy.mirror_map(np.array([0.0, 0.2, -0.2]), 1.0).theta.values
    np.testing.assert_allclose(th, [1 / 3, 1 / 3 - 0.1, 1 / 3 + 0.1])


# -- generic solver -------------------------------------------------------------------


def test_generic_matches_closed_forms(rng):
    for _ in range(20):
        M = int(rng.integers(2, 8))
        z, beta = rng.normal(scale=2, size=M), rng.uniform(0.2, 4)
        for proxy, tol in ((entropy_proxy(1.7, M), 1e-6), (power_proxy(1.0, M), 1e-5)):
            a = generic_mirror_map(proxy, z, beta).theta.values
            b = proxy.mirror_map(z, beta).theta.values
            assert norm_l1(a - b) <= tol


def test_generic_symmetric_at_zero():
    for proxy in (entropy_proxy(1.0, 5), power_proxy(1.0, 5), pnorm_proxy(2.0, 5)):
        th = generic_mirror_map(proxy, np.zeros(5), 1.0).theta.values
        np.testing.assert_allclose(th, proxy.lam / 5, atol=1e-10)


def test_generic_iteration_cap():
    with pytest.raises(NumericalError):
        generic_mirror_map(power_proxy(1.0, 4), np.array([0, 1, 2, 3.0]), 0.5, max_iter=2)


def test_pnorm_mirror_map_is_optimal(rng):
    # first-order check: z + beta grad V is constant on the support
    proxy = pnorm_proxy(1.0, 5)
    z = rng.normal(size=5)
    th = proxy.mirror_map(z, 0.8).theta.values
    g = z + 0.8 * proxy.gradient(th)
    on = th > 1e-6
    assert np.ptp(g[on]) < 1e-5
    assert np.all(g[~on] >= g[on].min() - 1e-5)


# -- proxy objects ------------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["entropy", "power", "pnorm", "euclidean"])
def test_proxy_invariants(kind, rng):
    proxy = make_proxy(kind, 1.5, 6)
    assert proxy.alpha > 0
    if kind in ("entropy", "power"):
        assert proxy.value(proxy.minimizer) == pytest.approx(0.0, abs=1e-9)
    pts = [Weights(random_simplex(rng, 6, 1.5), 1.5, renormalize=True) for _ in range(1000)]
    pts += [Weights.vertex(j, 6, 1.5) for j in range(6)]
    assert max(proxy.value(p) for p in pts) <= proxy.vmax + 1e-12


@settings(max_examples=50)
@given(st.sampled_from(["entropy", "power", "pnorm", "euclidean"]),
       arrays(float, 5, elements=st.floats(-20, 20)), st.floats(0.05, 20))
def test_mirror_map_feasible(kind, z, beta):
    th = make_proxy(kind, 2.0, 5).mirror_map(z, beta).theta
    assert th.mass == 2.0 and np.all(th.values >= 0) and abs(th.values.sum() - 2.0) <= 1e-10


def test_make_proxy_rejections():
    with pytest.raises(DomainError, match="not a proxy"):
        make_proxy("l1", 1.0, 4)
    with pytest.raises(UnsupportedError):
        make_proxy("cosh", 1.0, 4)


@pytest.mark.parametrize("lam, M", [(1, 2), (1, 16), (2, 8)])
def test_performance_ratios(lam, M):
    assert performance_ratio(entropy_proxy(lam, M)) == lam ** 2 * math.log(M)
    assert performance_ratio(euclidean_proxy(lam, M)) == lam ** 2 * M / 2


def test_performance_ratio_examples():
    assert performance_ratio(entropy_proxy(1, 16)) == pytest.approx(2.772589, abs=1e-6)
    assert performance_ratio(euclidean_proxy(1, 16)) == 8
    assert performance_ratio(entropy_proxy(2, 2)) == pytest.approx(4 * LN2, rel=1e-15)
    # closed forms agree with vmax / alpha
    for p in (entropy_proxy(2, 8), euclidean_proxy(2, 8)):
        assert performance_ratio(p) == pytest.approx(p.vmax / p.alpha, rel=1e-14)
