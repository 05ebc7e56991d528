"""Sampled property checks and path-wise diagnostics behind ``smdagg check``."""

from __future__ import annotations

import math

import numpy as np

from .data import SampleStream, benchmark_classification
from .engine import EngineConfig, run
from .harness import batch_minimizer, noise_check, regret_diagnostic
from .losses import classification_oracle, lipschitz_constant
from .proxy import (entropy_conjugate_value, entropy_hessian, entropy_mirror_map, entropy_proxy,
                    entropy_value, generic_mirror_map, power_proxy)
from .simplex import Weights, make_schedule_anytime, norm_l1, norm_linf


def _interior(rng, M, lam):
    return lam * rng.dirichlet(np.ones(M))


def fd_gradient(f, z, h):
    """Five-point central differences of ``f`` at ``z``."""
    out = np.empty(z.size)
    for j in range(z.size):
        e = np.zeros(z.size)
        e[j] = h
        out[j] = (-f(z + 2 * e) + 8 * f(z + e) - 8 * f(z - e) + f(z - 2 * e)) / (12 * h)
    return out


def check_conjugate_gradient(rng, n=100, rtol=1e-6, atol=1e-12):
    # componentwise |fd - grad| <= rtol |grad| + atol; the floor covers
    # components far below the differencing noise of W itself
    worst = 0.0
    for _ in range(n):
        M = int(rng.choice([2, 5, 20]))
        lam, beta = rng.uniform(0.5, 3.0), rng.uniform(0.2, 5.0)
        z = rng.normal(scale=2.0, size=M)
        grad = -entropy_mirror_map(z, beta, lam, M).theta.values
        fd = fd_gradient(lambda v: entropy_conjugate_value(v, beta, lam, M), z, 0.03 * beta)
        worst = max(worst, float(np.max(np.abs(fd - grad) / (rtol * np.abs(grad) + atol))))
    return worst <= 1.0, f"max error {worst:.3f} of the rtol={rtol:g}, atol={atol:g} budget"


def check_lipschitz(rng, n=1000):
    bad = 0
    for _ in range(n):
        M = int(rng.integers(2, 30))
        lam, beta = rng.uniform(0.5, 3.0), rng.uniform(0.1, 5.0)
        z1, z2 = rng.normal(scale=3.0, size=(2, M))
        lhs = norm_l1(entropy_mirror_map(z1, beta, lam, M).theta.values
                      - entropy_mirror_map(z2, beta, lam, M).theta.values)
        bad += lhs > lam / beta * norm_linf(z1 - z2) + 1e-12
    return bad == 0, f"{bad} violations in {n} pairs"


def check_hessian(rng, n=200):
    worst = -math.inf
    for _ in range(n):
        M = int(rng.integers(2, 12))
        lam, beta = rng.uniform(0.5, 3.0), rng.uniform(0.1, 5.0)
        Hm = entropy_hessian(rng.normal(size=M), beta, lam, M)
        x, y = rng.choice([-1.0, 1.0], size=(2, M))
        worst = max(worst, float(x @ Hm @ y - lam / beta))
    return worst <= 1e-9, f"max excess over lambda/beta {worst:.2e}"


def check_strong_convexity(rng, n=1000):
    bad = 0
    for _ in range(n):
        M = int(rng.integers(2, 20))
        lam = rng.uniform(0.5, 3.0)
        x, y = _interior(rng, M, lam), _interior(rng, M, lam)
        s = rng.uniform()
        v = lambda p: entropy_value(Weights(p, lam, renormalize=True))
        gap = s * v(x) + (1 - s) * v(y) - v(s * x + (1 - s) * y)
        bad += gap < 0.5 / lam * s * (1 - s) * norm_l1(x - y) ** 2 - 1e-9
    return bad == 0, f"{bad} violations in {n} triples"


def check_minimizer_gap(rng, n=1000):
    # V(x) >= V(theta*) + (alpha/2) |x - theta*|_1^2 with theta* uniform
    bad = 0
    for _ in range(n):
        M = int(rng.integers(2, 20))
        lam = rng.uniform(0.5, 3.0)
        x = Weights(_interior(rng, M, lam), lam, renormalize=True)
        star = np.full(M, lam / M)
        bad += entropy_value(x) < 0.5 / lam * norm_l1(x.values - star) ** 2 - 1e-9
    return bad == 0, f"{bad} violations in {n} points"


def check_power_solver(rng, n=20):
    worst = 0.0
    for _ in range(n):
        M = int(rng.integers(2, 8))
        proxy = power_proxy(1.0, M)
        z, beta = rng.normal(size=M), rng.uniform(0.3, 3.0)
        a = proxy.mirror_map(z, beta).theta.values
        b = generic_mirror_map(proxy, z, beta).theta.values
        worst = max(worst, norm_l1(a - b))
    return worst < 1e-5, f"max l1 disagreement {worst:.2e}"


def check_regret(seed, runs=10, t=100):
    dist, basis = benchmark_classification()
    lam, M = 1.0, basis.M
    proxy = entropy_proxy(lam, M)
    L = lipschitz_constant("hinge", lam, basis.K)
    sched = make_schedule_anytime(L, M)
    cfg = EngineConfig(proxy, sched)
    oracle = classification_oracle("hinge", basis, lam)
    logs = [run(cfg, SampleStream(dist, seed + r), oracle, t, log=True).trajectory
            for r in range(runs)]
    rep = regret_diagnostic(logs, dist, "hinge", basis, proxy, sched, L,
                            batch_minimizer(dist, "hinge", basis, lam))
    ok = rep.ok and rep.mean_excess <= rep.expectation_bound
    return ok, (f"max violation {rep.max_violation:.2e}; mean excess {rep.mean_excess:.4f} "
                f"vs expectation bound {rep.expectation_bound:.4f}")


def check_noise(seed, n=20000):
    dist, basis = benchmark_classification()
    theta = Weights.uniform(basis.M)
    _, _, z = noise_check(dist, "hinge", basis, theta, n, seed)
    return z < 4.5, f"largest |mean|/stderr over {basis.M} coordinates: {z:.2f}"


def run_checks(seed: int = 0):
    """Yield ``(name, passed, detail)`` for each check."""
    rng = np.random.default_rng(seed)
    yield ("conjugate gradient vs finite differences", *check_conjugate_gradient(rng))
    yield ("mirror-map Lipschitz bound", *check_lipschitz(rng))
    yield ("Hessian bilinear bound", *check_hessian(rng))
    yield ("entropy strong convexity", *check_strong_convexity(rng))
    yield ("entropy minimizer gap", *check_minimizer_gap(rng))
    yield ("power mirror map vs numerical solver", *check_power_solver(rng))
    yield ("path-wise regret inequality", *check_regret(seed))
    yield ("zero-mean sub-gradient noise", *check_noise(seed))
