"""Convex losses, monotone derivatives, Lipschitz constants and sub-gradient oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError, UnsupportedError

LN2 = math.log(2.0)
MARGIN_LOSSES = ("hinge", "exponential", "logit")
LOSSES = MARGIN_LOSSES + ("squared",)


def _kind(loss) -> str:
    kind = getattr(loss, "kind", loss)
    if kind not in LOSSES:
        raise UnsupportedError(f"unknown loss {kind!r}; choose from {LOSSES}")
    return kind


def loss_value(kind, x):
    """Loss at margin ``x`` (for ``squared``, ``x`` is the residual)."""
    kind = _kind(kind)
    x = np.asarray(x, dtype=float)
    if kind == "hinge":
        out = np.maximum(1.0 - x, 0.0)
    elif kind == "exponential":
        out = np.exp(-x)
    elif kind == "logit":
        out = np.logaddexp(0.0, -x) / LN2
    else:
        out = x * x
    return out[()] if out.ndim == 0 else out


def loss_derivative(kind, x):
    """Right-continuous, non-decreasing derivative of a margin loss.

    The hinge derivative is -1 left of the kink and 0 from the kink on.
    """
    kind = _kind(kind)
    if kind == "squared":
        raise UnsupportedError("squared loss has no margin-form derivative; "
                               "use regression_subgradient")
    x = np.asarray(x, dtype=float)
    if kind == "hinge":
        out = np.where(x < 1.0, -1.0, 0.0)
    elif kind == "exponential":
        out = -np.exp(-x)
    else:
        out = -expit(-x) / LN2
    return out[()] if out.ndim == 0 else out


def lipschitz_constant(kind, lam: float, K: float) -> float:
    """``K * sup |phi'(x)|`` over ``[-K lam, K lam]``.

    ``|phi'|`` is non-increasing for all three margin losses, so the sup is
    read off the interval's left endpoint (and the hinge kink, if inside).
    """
    kind = _kind(kind)
    if not (lam > 0 and K > 0):
        raise DomainError(f"lambda and K must be positive, got {lam}, {K}")
    if kind == "squared":
        raise UnsupportedError("use regression_lipschitz for the squared loss")
    lo, hi = -K * lam, K * lam
    points = [lo, hi] + ([1.0] if lo < 1.0 <= hi else [])
    return float(K * max(abs(loss_derivative(kind, p)) for p in points))


def regression_lipschitz(lam: float, K: float, ymax: float) -> float:
    """Sup-norm bound ``2 (K lam + ymax) K`` on the squared-loss gradient."""
    if not (lam > 0 and K > 0 and ymax >= 0):
        raise DomainError("lambda, K must be positive and ymax nonnegative")
    return 2.0 * (K * lam + ymax) * K


@dataclass(frozen=True)
class LossFunction:
    kind: str

    def __post_init__(self):
        _kind(self.kind)

    def value(self, x):
        return loss_value(self.kind, x)

    def derivative(self, x):
        return loss_derivative(self.kind, x)


@dataclass(frozen=True)
class SubgradientSample:
    u: np.ndarray
    context: int = 0

    def __array__(self, dtype=None, copy=None):
        return self.u if dtype is None else self.u.astype(dtype)


def classification_subgradient(loss, H_of_x, y, theta, context: int = 0) -> SubgradientSample:
    """``phi'(y theta.H) * y * H``."""
    if y not in (-1, 1):
        raise DomainError(f"classification label must be -1 or +1, got {y!r}")
    H = np.asarray(H_of_x, dtype=float)
    th = np.asarray(theta, dtype=float)
    d = loss_derivative(loss, y * float(th @ H))
    return SubgradientSample(d * y * H, context)


def regression_subgradient(H_of_x, y, theta, context: int = 0) -> SubgradientSample:
    """Gradient of ``(y - theta.H)^2`` in ``theta``: ``2 (theta.H - y) H``."""
    H = np.asarray(H_of_x, dtype=float)
    th = np.asarray(theta, dtype=float)
    return SubgradientSample(2.0 * (float(th @ H) - float(y)) * H, context)


@dataclass(frozen=True)
class GeneralLossOracle:
    """Loss ``Q(theta, z)`` with sub-gradient ``subgrad(theta, z)``; ``z = (x, y)``.

    ``linf_bound`` bounds ``E |subgrad|_inf^2`` by its square over the
    simplex.
    """

    q: Callable
    subgrad: Callable
    linf_bound: float
    kind: str = "classification"


def classification_oracle(loss, basis, lam: float) -> GeneralLossOracle:
    kind = _kind(loss)

    def q(theta, z):
        x, y = z
        return float(loss_value(kind, y * float(np.asarray(theta) @ basis.evaluate(x))))

    def subgrad(theta, z):
        x, y = z
        return classification_subgradient(kind, basis.evaluate(x), y, theta).u

    return GeneralLossOracle(q, subgrad, lipschitz_constant(kind, lam, basis.K),
                             "classification")


def regression_oracle(basis, lam: float, ymax: float) -> GeneralLossOracle:
    def q(theta, z):
        x, y = z
        return float((y - float(np.asarray(theta) @ basis.evaluate(x))) ** 2)

    def subgrad(theta, z):
        x, y = z
        return regression_subgradient(basis.evaluate(x), y, theta).u

    return GeneralLossOracle(q, subgrad, regression_lipschitz(lam, basis.K, ymax),
                             "regression")
