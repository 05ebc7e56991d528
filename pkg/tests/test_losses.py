import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smdagg import (DomainError, UnsupportedError, benchmark_classification,
                    classification_oracle, classification_subgradient, exact_gradient,
                    lipschitz_constant, loss_derivative, loss_value, regression_lipschitz,
                    regression_oracle, regression_subgradient, benchmark_regression)
from smdagg.losses import LossFunction, MARGIN_LOSSES

xs = st.floats(-30, 30)


@pytest.mark.parametrize("kind", ["hinge", "logit", "exponential"])
def test_loss_at_zero_is_one(kind):
    assert loss_value(kind, 0.0) == pytest.approx(1.0, rel=1e-15)


def test_logit_is_base_two():
    assert loss_value("logit", 1.0) == pytest.approx(math.log2(1 + math.exp(-1)), rel=1e-15)
    assert loss_derivative("logit", 0.0) == pytest.approx(-0.5 / math.log(2), rel=1e-15)


def test_derivative_examples():
    assert loss_derivative("hinge", 1.0) == 0.0
    assert loss_derivative("hinge", 0.999) == -1.0
    assert loss_derivative("exponential", 0.0) == -1.0
    with pytest.raises(UnsupportedError):
        loss_derivative("squared", 0.0)


@pytest.mark.parametrize("kind", MARGIN_LOSSES + ("squared",))
def test_loss_convex(kind, rng):
    a, b = rng.uniform(-5, 5, size=(2, 10 ** 4))
    s = rng.uniform(size=10 ** 4)
    mid = loss_value(kind, s * a + (1 - s) * b)
    ends = s * loss_value(kind, a) + (1 - s) * loss_value(kind, b)
    assert np.all(mid <= ends + 1e-12 * (1 + np.abs(ends)))


@pytest.mark.parametrize("kind", MARGIN_LOSSES)
def test_derivative_monotone(kind, rng):
    grid = np.sort(rng.uniform(-10, 10, size=5000))
    assert np.all(np.diff(loss_derivative(kind, grid)) >= 0)


@pytest.mark.parametrize("kind", ["exponential", "logit"])
@given(x=xs)
def test_derivative_matches_fd(kind, x):
    h = 1e-5
    fd = (loss_value(kind, x + h) - loss_value(kind, x - h)) / (2 * h)
    assert loss_derivative(kind, x) == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_lipschitz_examples():
    assert lipschitz_constant("hinge", 1.0, 1.0) == 1.0
    assert lipschitz_constant("exponential", 1.0, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert lipschitz_constant("hinge", 0.5, 2.0) == 2.0
    assert lipschitz_constant("logit", 2.0, 1.5) == pytest.approx(
        1.5 / ((1 + math.exp(-3.0)) * math.log(2)), rel=1e-14)
    with pytest.raises(DomainError):
        lipschitz_constant("hinge", 0.0, 1.0)
    assert regression_lipschitz(1.0, 1.0, 1.0) == 4.0


@pytest.mark.parametrize("kind", MARGIN_LOSSES)
def test_lipschitz_is_sup_of_derivative(kind, rng):
    for lam, K in ((1.0, 1.0), (0.3, 2.0), (2.5, 0.7)):
        grid = np.linspace(-K * lam, K * lam, 100001)
        assert lipschitz_constant(kind, lam, K) == pytest.approx(
            K * np.abs(loss_derivative(kind, grid)).max(), rel=1e-12)


def test_classification_subgradient_examples():
    u = classification_subgradient("hinge", [1.0, -1.0], 1, [0.5, 0.5])
    np.testing.assert_array_equal(u.u, [-1.0, 1.0])
    u = classification_subgradient("hinge", [1.0, 1.0], 1, [0.5, 0.5])
    np.testing.assert_array_equal(u.u, [0.0, 0.0])
    with pytest.raises(DomainError):
        classification_subgradient("hinge", [1.0, 1.0], 0, [0.5, 0.5])


@pytest.mark.parametrize("kind", MARGIN_LOSSES)
def test_subgradient_bounded_by_lipschitz(kind, rng):
    lam, K, M = 1.7, 0.8, 6
    L = lipschitz_constant(kind, lam, K)
    for _ in range(1000):
        H = rng.uniform(-K, K, size=M)
        th = lam * rng.dirichlet(np.ones(M))
        u = classification_subgradient(kind, H, int(rng.choice([-1, 1])), th).u
        assert np.abs(u).max() <= L * (1 + 1e-12)


def test_regression_subgradient_examples():
    np.testing.assert_array_equal(regression_subgradient([1.0, 0.0], 0.0, [1.0, 0.0]).u, [2.0, 0.0])
    H = np.array([0.5, -1.0])
    th = np.array([0.2, 0.8])
    np.testing.assert_array_equal(regression_subgradient(H, th @ H, th).u, [0.0, 0.0])
    np.testing.assert_array_equal(regression_subgradient(H, 0.3, th).u,
                                  regression_subgradient(-H, -0.3, th).u)


@pytest.mark.parametrize("kind", MARGIN_LOSSES)
def test_noise_has_zero_mean_exactly(kind):
    # expectation of the oracle over the support equals the exact gradient
    dist, basis = benchmark_classification()
    oracle = classification_oracle(kind, basis, 1.0)
    th = np.linspace(1, 2, basis.M)
    th /= th.sum()
    mean = sum(p * oracle.subgrad(th, dist.atom(i)) for i, p in enumerate(dist.probs))
    np.testing.assert_allclose(mean, exact_gradient(th, dist, kind, basis), atol=1e-12)


def test_general_oracle_convex_and_bounded(rng):
    dist, basis = benchmark_regression()
    oracle = regression_oracle(basis, 1.0, 1.0)
    assert oracle.linf_bound == 4.0
    for _ in range(200):
        a, b = rng.dirichlet(np.ones(basis.M), size=2)
        s = rng.uniform()
        z = dist.atom(int(rng.integers(dist.n_atoms)))
        assert oracle.q(s * a + (1 - s) * b, z) <= s * oracle.q(a, z) + (1 - s) * oracle.q(b, z) + 1e-12
        second = sum(p * np.abs(oracle.subgrad(a, dist.atom(i))).max() ** 2
                     for i, p in enumerate(dist.probs))
        assert second <= oracle.linf_bound ** 2


def test_loss_function_wrapper():
    f = LossFunction("exponential")
    assert f.value(0.0) == 1.0 and f.derivative(0.0) == -1.0
    with pytest.raises(UnsupportedError):
        LossFunction("huber")
