import numpy as np
import pytest

from smdagg import FiniteDistribution, stump_basis


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def separable():
    """One atom at x = 0.5, label +1; H(x) = (1, -1)."""
    dist = FiniteDistribution(np.array([[0.5]]), np.array([1.0]), np.array([1.0]))
    return dist, stump_basis(1, [[0.0]])


def random_simplex(rng, M, lam=1.0):
    return lam * rng.dirichlet(np.ones(M))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
