"""Proxy functions on the lambda-simplex, their beta-conjugates and mirror maps.

A proxy ``V`` induces the beta-conjugate

    W_beta(z) = max_theta { -z.theta - beta * V(theta) }

whose negative gradient ``-grad W_beta(z)`` is the maximizer, i.e. the
mirror image of a dual vector ``z`` on the simplex.  The entropy proxy has
closed forms (Gibbs weights); the power proxy is solved through its KKT
conditions; anything else falls back to a numerical solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, NumericalError, UnsupportedError
from .simplex import Weights, _finite_vector, project_simplex

KINDS = ("entropy", "power", "pnorm", "euclidean")


@dataclass(frozen=True)
class MirrorMapResult:
    theta: Weights
    wvalue: Optional[float] = None


def _check_beta(beta):
    if not beta > 0:
        raise DomainError(f"temperature beta must be positive, got {beta}")


def _dual(z, M=None):
    z = _finite_vector(z, "z")
    if M is not None and z.size != M:
        raise DomainError(f"dual vector has length {z.size}, expected {M}")
    return z


# -- entropy -----------------------------------------------------------------


def entropy_value(theta: Weights) -> float:
    lam, M = theta.mass, theta.M
    return float(lam * math.log(M / lam) + np.sum(xlogy(theta.values, theta.values)))


def _gibbs(z, beta):
    a = -z / beta
    a -= a.max()
    e = np.exp(a)
    return e / e.sum()


def entropy_conjugate_value(z, beta: float, lam: float, M: int) -> float:
    """``lam * beta * ln(mean(exp(-z / beta)))`` evaluated with a max shift."""
    _check_beta(beta)
    z = _dual(z, M)
    a = -z / beta
    amax = a.max()
    return float(lam * beta * (amax + math.log(np.exp(a - amax).sum()) - math.log(M)))


def entropy_mirror_map(z, beta: float, lam: float, M: int,
                       with_value: bool = False) -> MirrorMapResult:
    _check_beta(beta)
    z = _dual(z, M)
    theta = Weights(lam * _gibbs(z, beta), lam)
    w = entropy_conjugate_value(z, beta, lam, M) if with_value else None
    return MirrorMapResult(theta, w)


def entropy_hessian(z, beta: float, lam: float, M: int) -> np.ndarray:
    _check_beta(beta)
    a = _gibbs(_dual(z, M), beta)
    return (lam / beta) * (np.diag(a) - np.outer(a, a))


# -- power (f-divergence type) -------------------------------------------------


def _power_constants(lam, M):
    s = 1.0 / math.log(M)
    c0 = -lam ** 2 / (math.e * s * (s + 1))
    c1 = lam ** (1 - s) / (s * (s + 1))
    return s, c0, c1


def power_value(theta: Weights, M: Optional[int] = None) -> float:
    M = theta.M if M is None else M
    if M != theta.M:
        raise DomainError(f"theta has {theta.M} components, expected {M}")
    s, c0, c1 = _power_constants(theta.mass, M)
    return float(c0 + c1 * np.sum(theta.values ** (s + 1)))


def power_mirror_map(z, beta: float, lam: float, M: int, tol: float = 1e-10,
                     with_value: bool = False, max_iter: int = 200) -> MirrorMapResult:
    """Minimize ``z.theta + beta V(theta)`` via KKT and bisection on the multiplier.

    ``theta_j = max(0, (mu - z_j) / (beta C1 (s+1)))^(1/s)`` with ``mu``
    bracketed in ``[min z, min z + beta C1 (s+1) lam^s]``.
    """
    _check_beta(beta)
    if not tol > 0:
        raise DomainError("tol must be positive")
    z = _dual(z, M)
    s, _, c1 = _power_constants(lam, M)
    scale = beta * c1 * (s + 1)
    zs = z - z.min()

    def theta_at(mu):
        return (np.maximum(mu - zs, 0.0) / scale) ** (1.0 / s)

    lo, hi = 0.0, scale * lam ** s
    for _ in range(max_iter):
        mu = 0.5 * (lo + hi)
        th = theta_at(mu)
        gap = th.sum() - lam
        if abs(gap) < tol:
            break
        if gap < 0:
            lo = mu
        else:
            hi = mu
    else:
        raise NumericalError("power mirror map bisection did not converge",
                             iterations=max_iter, mass_gap=float(gap), bracket=(lo, hi))
    theta = Weights(th * (lam / th.sum()), lam)
    w = None
    if with_value:
        w = float(-z @ theta.values - beta * power_value(theta, M))
    return MirrorMapResult(theta, w)


# -- p-norm and euclidean ------------------------------------------------------


def pnorm_value(theta: Weights, M: Optional[int] = None) -> float:
    M = theta.M if M is None else M
    p = 1.0 + 1.0 / math.log(M)
    return float(np.sum(theta.values ** p) ** (2.0 / p) / (2.0 * theta.mass ** 2))


def euclidean_value(theta: Weights) -> float:
    return float(theta.values @ theta.values)


def euclidean_mirror_map(z, beta: float, lam: float, M: int,
                         with_value: bool = False) -> MirrorMapResult:
    """argmin of ``z.theta + beta |theta|_2^2`` is the projection of ``-z / (2 beta)``."""
    _check_beta(beta)
    z = _dual(z, M)
    theta = Weights(project_simplex(-z / (2.0 * beta), lam), lam, renormalize=True)
    w = float(-z @ theta.values - beta * euclidean_value(theta)) if with_value else None
    return MirrorMapResult(theta, w)


# -- proxy objects -------------------------------------------------------------


@dataclass(frozen=True)
class ProxyFunction:
    """A proxy ``V`` on the lambda-simplex with strong-convexity modulus ``alpha``
    (with respect to the l1 norm), minimizer ``theta*`` and maximum ``vmax``."""

    kind: str
    lam: float
    M: int
    alpha: float
    minimizer: Weights
    vmax: Optional[float]

    def value(self, theta: Weights) -> float:
        if self.kind == "entropy":
            return entropy_value(theta)
        if self.kind == "power":
            return power_value(theta, self.M)
        if self.kind == "pnorm":
            return pnorm_value(theta, self.M)
        return euclidean_value(theta)

    def gradient(self, theta) -> np.ndarray:
        """Gradient of ``V`` at an interior point."""
        th = np.asarray(theta, dtype=float)
        if self.kind == "entropy":
            return np.log(np.maximum(th, 1e-300)) + 1.0
        if self.kind == "power":
            s, _, c1 = _power_constants(self.lam, self.M)
            return c1 * (s + 1) * th ** s
        if self.kind == "pnorm":
            p = 1.0 + 1.0 / math.log(self.M)
            norm = np.sum(th ** p) ** (1.0 / p)
            return norm ** (2.0 - p) * th ** (p - 1.0) / self.lam ** 2
        return 2.0 * th

    def mirror_map(self, z, beta: float, with_value: bool = False,
                   tol: float = 1e-10) -> MirrorMapResult:
        """``-grad W_beta(z)``: closed form where available, numerical otherwise."""
        if self.kind == "entropy":
            return entropy_mirror_map(z, beta, self.lam, self.M, with_value)
        if self.kind == "power":
            return power_mirror_map(z, beta, self.lam, self.M, tol, with_value)
        if self.kind == "euclidean":
            return euclidean_mirror_map(z, beta, self.lam, self.M, with_value)
        return generic_mirror_map(self, z, beta, with_value=with_value)

    def conjugate_value(self, z, beta: float) -> float:
        return self.mirror_map(z, beta, with_value=True).wvalue


def entropy_proxy(lam: float = 1.0, M: int = 2) -> ProxyFunction:
    return ProxyFunction("entropy", float(lam), M, 1.0 / lam,
                         Weights.uniform(M, lam), lam * math.log(M))


def power_proxy(lam: float = 1.0, M: int = 2) -> ProxyFunction:
    # V''_j = lam^(1-s) theta_j^(s-1).  For M >= 3 (s < 1) the l1 modulus is
    # 1 / max_theta sum_j 1/V''_j = 1 / (lam^(s-1) max sum theta_j^(1-s)) = 1 / M^s = 1/e.
    # For M = 2 (s > 1) the curvature vanishes at the faces; along h = (d, -d)
    # the modulus is min (V''_1 + V''_2) / 4 = 1/4, attained at a vertex.
    logm = math.log(M)
    vmax = lam ** 2 * (1 - math.exp(-1)) * logm ** 2 / (logm + 1)
    alpha = 0.25 if M == 2 else math.exp(-1)
    return ProxyFunction("power", float(lam), M, alpha, Weights.uniform(M, lam), vmax)


def pnorm_proxy(lam: float = 1.0, M: int = 3) -> ProxyFunction:
    if M < 3:
        raise DomainError(
            "the p-norm proxy needs M >= 3: for M = 2, p = 1 + 1/ln 2 > 2 and "
            "|theta|_p^2 has no l1 strong-convexity modulus at the vertices")
    p = 1.0 + 1.0 / math.log(M)
    # (p-1)-strongly convex in l_p, and |h|_1 <= M^(1-1/p) |h|_p = e^(1/p) |h|_p
    alpha = (p - 1.0) * math.exp(-2.0 / p) / lam ** 2
    return ProxyFunction("pnorm", float(lam), M, alpha, Weights.uniform(M, lam), 0.5)


def euclidean_proxy(lam: float = 1.0, M: int = 2) -> ProxyFunction:
    return ProxyFunction("euclidean", float(lam), M, 2.0 / M,
                         Weights.uniform(M, lam), float(lam) ** 2)


def make_proxy(kind: str, lam: float = 1.0, M: int = 2) -> ProxyFunction:
    if M < 2:
        raise DomainError("M must be at least 2")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if kind in ("l1", "L1"):
        raise DomainError(
            "|theta|_1 is not a proxy function: it is constant on the simplex "
            "and not strongly convex with respect to the l1 norm")
    factories = {"entropy": entropy_proxy, "power": power_proxy,
                 "pnorm": pnorm_proxy, "euclidean": euclidean_proxy}
    if kind not in factories:
        raise UnsupportedError(f"unknown proxy kind {kind!r}; choose from {KINDS}")
    return factories[kind](lam, M)


def performance_ratio(proxy: ProxyFunction) -> float:
    """``vmax / alpha``, the proxy-dependent factor in the excess-risk bound."""
    if proxy.kind == "entropy":
        return proxy.lam ** 2 * math.log(proxy.M)
    if proxy.kind == "euclidean":
        return proxy.lam ** 2 * proxy.M / 2
    if proxy.vmax is None:
        raise UnsupportedError(f"proxy {proxy.kind!r} has no known maximum value")
    return proxy.vmax / proxy.alpha


# -- numerical fallback -------------------------------------------------------


def generic_mirror_map(proxy: ProxyFunction, z, beta: float, tol: float = 1e-12,
                       max_iter: int = 100_000, with_value: bool = False) -> MirrorMapResult:
    """Minimize ``z.theta + beta V(theta)`` over the simplex numerically.

    Entropic mirror descent (multiplicative updates kept in log space) with
    a non-increasing step chosen by backtracking on the relative-smoothness
    condition ``f(x+) <= f(x) + g.(x+ - x) + KL(x+ | x) / eta``.  Stops once
    an accepted step moves the iterate by less than ``tol`` in l1.
    """
    _check_beta(beta)
    if not tol > 0:
        raise DomainError("tol must be positive")
    lam, M = proxy.lam, proxy.M
    z = _dual(z, M)
    zs = z - z.min()

    def objective(th):
        return float(zs @ th) + beta * proxy.value(Weights(th, lam, renormalize=True))

    logth = np.full(M, math.log(lam / M))
    th = np.exp(logth)
    f = objective(th)
    eta = 1.0 / beta
    for it in range(max_iter):
        g = zs + beta * proxy.gradient(th)
        while True:
            cand_log = logth - eta * g
            cand_log += math.log(lam) - _logsumexp(cand_log)
            cand = np.exp(cand_log)
            f_new = objective(cand)
            kl = float(np.sum(cand * (cand_log - logth)))
            slack = 1e-13 * (1.0 + abs(f))
            if f_new <= f + g @ (cand - th) + kl / eta + slack:
                break
            eta *= 0.5
            if eta < 1e-300:
                raise NumericalError("generic mirror map step size underflow", iteration=it)
        change = float(np.abs(cand - th).sum())
        logth, th, f = cand_log, cand, f_new
        if change < tol:
            break
    else:
        raise NumericalError("generic mirror map hit its iteration cap",
                             iterations=max_iter, last_change=change)
    theta = Weights(th, lam, renormalize=True)
    w = float(-z @ theta.values - beta * proxy.value(theta)) if with_value else None
    return MirrorMapResult(theta, w)


def _logsumexp(a):
    m = a.max()
    return m + math.log(np.exp(a - m).sum())
