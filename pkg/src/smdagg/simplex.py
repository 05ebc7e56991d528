"""Vector primitives, lambda-simplex geometry and step/temperature schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

MASS_TOL = 1e-10


def _finite_vector(v, name="v") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def norm_l1(v) -> float:
    return float(np.sum(np.abs(_finite_vector(v))))


def norm_linf(v) -> float:
    arr = _finite_vector(v)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


@dataclass(frozen=True, eq=False)
class Weights:
    """A point of the lambda-simplex ``{theta >= 0, sum(theta) = mass}``.

    Construction rejects infeasible vectors; pass ``renormalize=True`` to
    clip tiny negatives and rescale instead.
    """

    values: np.ndarray
    mass: float = 1.0
    renormalize: bool = field(default=False, repr=False)

    def __post_init__(self):
        mass = float(self.mass)
        if not (mass > 0 and math.isfinite(mass)):
            raise DomainError(f"simplex mass must be positive, got {self.mass}")
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise DomainError(f"weights need M >= 2 components, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("weights have non-finite entries")
        if self.renormalize:
            v = np.maximum(v, 0.0)
            total = v.sum()
            if total <= 0:
                raise DomainError("cannot renormalize a vector with no positive mass")
            v *= mass / total
        elif np.any(v < 0):
            raise DomainError(f"weights must be nonnegative, min entry {v.min()!r}")
        elif abs(v.sum() - mass) > MASS_TOL:
            raise DomainError(
                f"weights sum to {v.sum()!r}, expected {mass!r} within {MASS_TOL}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def uniform(cls, M: int, mass: float = 1.0) -> "Weights":
        if M < 2:
            raise DomainError("M must be at least 2")
        return cls(np.full(M, mass / M), mass)

    @classmethod
    def vertex(cls, j: int, M: int, mass: float = 1.0) -> "Weights":
        v = np.zeros(M)
        v[j] = mass
        return cls(v, mass)

    @property
    def M(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"Weights({np.array2string(self.values, precision=6)}, mass={self.mass})"


@dataclass(frozen=True, eq=False)
class DualVector:
    """Unconstrained point of the dual space (sup-norm)."""

    values: np.ndarray

    def __post_init__(self):
        v = _finite_vector(self.values, "dual vector").copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, M: int) -> "DualVector":
        return cls(np.zeros(M))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size


def project_simplex(v, mass: float = 1.0) -> np.ndarray:
    """Euclidean projection of ``v`` onto ``{x >= 0, sum(x) = mass}``.

    Sort-based threshold search, O(M log M).
    """
    v = _finite_vector(v)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - mass
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


# -- schedules ---------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Step sizes ``gamma(i)`` and temperatures ``beta(i)`` as closed forms.

    The sequences are stored in unit form and multiplied by ``scale``.
    Iterates of the mirror-descent recursion depend only on the ratio of
    the two sequences, so the engine runs on the unit sequences and a
    joint rescaling (``scaled``) leaves its trajectory bit-identical.
    ``beta(0)`` is ``beta0``.
    """

    kind: str
    unit_gamma: Callable[[int], float]
    unit_beta: Callable[[int], float]
    scale: float = 1.0

    def gamma(self, i: int) -> float:
        return self.scale * self.unit_gamma(i)

    def beta(self, i: int) -> float:
        return self.scale * self.unit_beta(i)

    @property
    def beta0(self) -> float:
        return self.beta(0)

    def scaled(self, c: float) -> "Schedule":
        if not c > 0:
            raise DomainError(f"scale factor must be positive, got {c}")
        return replace(self, scale=self.scale * c)


class _Anytime:
    def __init__(self, beta0):
        self.beta0 = beta0

    def gamma(self, i):
        return 1.0

    def beta(self, i):
        return self.beta0 * math.sqrt(i + 1)


class _Constant:
    def __init__(self, value):
        self.value = value

    def __call__(self, i):
        return self.value


def make_schedule_anytime(L: float, M: int, *, alpha_vbar: Optional[float] = None) -> Schedule:
    """``gamma_i = 1``, ``beta_i = beta0 * sqrt(i + 1)`` with ``beta0 = L / sqrt(ln M)``.

    ``alpha_vbar`` overrides the product ``alpha * Vbar`` (``ln M`` for the
    entropy proxy, whatever lambda is) for other proxies.
    """
    if not L > 0:
        raise DomainError(f"L must be positive, got {L}")
    if M < 2:
        raise DomainError(f"M must be at least 2, got {M}")
    denom = math.log(M) if alpha_vbar is None else float(alpha_vbar)
    if not denom > 0:
        raise DomainError("alpha * Vbar must be positive")
    rule = _Anytime(L / math.sqrt(denom))
    return Schedule("anytime", rule.gamma, rule.beta)


def make_schedule_fixed_horizon(L: float, alpha: float, Vstar: float, t: int) -> Schedule:
    """Constant ``gamma = 1/sqrt(t)`` and ``beta = L / sqrt(2 alpha Vstar)``."""
    if t < 1:
        raise DomainError(f"horizon must be >= 1, got {t}")
    for name, val in (("L", L), ("alpha", alpha), ("Vstar", Vstar)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val}")
    return Schedule("fixed-horizon", _Constant(1.0 / math.sqrt(t)),
                    _Constant(L / math.sqrt(2.0 * alpha * Vstar)))


def make_schedule_custom(gamma: Callable[[int], float], beta: Callable[[int], float],
                         check_upto: int = 1000) -> Schedule:
    """Wrap user sequences; positivity and monotone ``beta`` are checked on a prefix."""
    prev = beta(0)
    if not prev > 0:
        raise DomainError("beta(0) must be positive")
    for i in range(1, check_upto + 1):
        g, b = gamma(i), beta(i)
        if not g > 0:
            raise DomainError(f"gamma({i}) = {g} is not positive")
        if b < prev:
            raise DomainError(f"beta must be non-decreasing: beta({i}) = {b} < beta({i - 1}) = {prev}")
        prev = b
    return Schedule("custom", gamma, beta)
