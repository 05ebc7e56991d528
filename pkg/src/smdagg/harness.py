"""Exact risks, batch optimum, theoretical bounds, replicate experiments and diagnostics."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import data as data_mod
from .data import BaseClass, FiniteDistribution, SampleStream
from .engine import EngineConfig, Trajectory, batch_average, run
from .errors import DomainError, NumericalError, UsageError
from .losses import (MARGIN_LOSSES, classification_oracle, loss_derivative, loss_value,
                     lipschitz_constant, regression_lipschitz, regression_oracle)
from .proxy import ProxyFunction, make_proxy
from .simplex import Schedule, Weights, make_schedule_anytime, make_schedule_fixed_horizon

CSV_COLUMNS = ("algorithm", "t", "mean_excess", "stderr", "bound", "misclass")


def _loss_kind(loss):
    return getattr(loss, "kind", loss)


def _check_pairing(dist, loss):
    kind = _loss_kind(loss)
    if dist.kind == "classification" and kind not in MARGIN_LOSSES:
        raise DomainError(f"loss {kind!r} does not apply to a classification distribution")
    if dist.kind == "regression" and kind != "squared":
        raise DomainError(f"regression distributions take the squared loss, got {kind!r}")
    return kind


def _risk_and_grad(thetas, dist, kind, H, want_grad=True):
    """Vectorized over rows of ``thetas`` (shape ``(k, M)``)."""
    F = H @ thetas.T                               # (n_atoms, k)
    p, y = dist.probs, dist.ys
    if kind == "squared":
        r = F - y[:, None]
        risk = p @ (r * r)
        grad = ((2.0 * p)[:, None] * r).T @ H if want_grad else None
    else:
        m = y[:, None] * F
        risk = p @ loss_value(kind, m)
        grad = ((p * y)[:, None] * loss_derivative(kind, m)).T @ H if want_grad else None
    return risk, grad


def exact_phi_risk(theta, dist: FiniteDistribution, loss, basis: BaseClass) -> float:
    kind = _check_pairing(dist, loss)
    th = np.asarray(theta, dtype=float)[None, :]
    risk, _ = _risk_and_grad(th, dist, kind, basis.evaluate_many(dist.xs), want_grad=False)
    return float(risk[0])


def exact_gradient(theta, dist: FiniteDistribution, loss, basis: BaseClass) -> np.ndarray:
    """Expected sub-gradient ``sum_atoms p * phi'(y theta.H) * y * H``."""
    kind = _check_pairing(dist, loss)
    th = np.asarray(theta, dtype=float)[None, :]
    _, grad = _risk_and_grad(th, dist, kind, basis.evaluate_many(dist.xs))
    return grad[0]


def misclassification(theta, dist: FiniteDistribution, basis: BaseClass) -> float:
    """``P(Y != g(X))`` with ``g(x) = +1`` iff ``theta.H(x) > 0``."""
    f = basis.evaluate_many(dist.xs) @ np.asarray(theta, dtype=float)
    pred = np.where(f > 0, 1.0, -1.0)
    return float(dist.probs @ (pred != dist.ys))


def first_order_gap(theta, grad, lam) -> float:
    """``max_v (theta - v).grad`` over the simplex vertices ``v``."""
    return float(np.asarray(theta) @ grad - lam * grad.min())


# -- batch optimum -----------------------------------------------------------------


@dataclass
class BatchResult:
    theta: Weights
    value: float
    gap: float
    method: str
    iterations: int = 0

    def __iter__(self):
        return iter((self.theta, self.value))


def _simplex_grid(M, step, lam):
    n = int(round(1.0 / step))
    if M == 2:
        a = np.arange(n + 1) / n
        return lam * np.column_stack([a, 1.0 - a])
    i, j = np.triu_indices(n + 1)
    a, b = i / n, (j - i) / n
    return lam * np.column_stack([a, b, 1.0 - a - b]).clip(min=0.0)


def _grid_minimum(dist, kind, H, lam, M, step=1e-3, chunk=50_000):
    pts = _simplex_grid(M, step, lam)
    best_val, best = math.inf, None
    for s in range(0, pts.shape[0], chunk):
        block = pts[s:s + chunk]
        risk, _ = _risk_and_grad(block, dist, kind, H, want_grad=False)
        k = int(np.argmin(risk))
        if risk[k] < best_val:
            best_val, best = float(risk[k]), block[k]
    return best, best_val


def _hinge_lp(dist, H, lam):
    """Exact hinge-risk minimum as an LP in ``(theta, slack)``."""
    n, M = H.shape
    c = np.concatenate([np.zeros(M), dist.probs])
    A_ub = np.hstack([-(dist.ys[:, None] * H), -np.eye(n)])
    b_ub = -np.ones(n)
    A_eq = np.concatenate([np.ones(M), np.zeros(n)])[None, :]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[lam],
                  bounds=[(0, None)] * (M + n), method="highs")
    if res.status != 0:
        return None
    return np.maximum(res.x[:M], 0.0)


def _entropic_descent(dist, kind, H, lam, tol, max_iter):
    """Deterministic entropic mirror descent on the exact gradient.

    Steps start at ``1 / |grad|_inf`` and are halved whenever the
    relative-smoothness test fails, so they never increase.
    """
    M = H.shape[1]
    logth = np.full(M, math.log(lam / M))
    th = np.exp(logth)
    risk, grad = _risk_and_grad(th[None, :], dist, kind, H)
    f, g = float(risk[0]), grad[0]
    eta = 1.0 / max(np.abs(g).max(), 1e-12)
    best = (f, th, first_order_gap(th, g, lam))
    for it in range(1, max_iter + 1):
        gap = first_order_gap(th, g, lam)
        if gap < tol:
            return th, f, gap, it
        while True:
            cand_log = logth - eta * g
            m = cand_log.max()
            cand_log += math.log(lam) - (m + math.log(np.exp(cand_log - m).sum()))
            cand = np.exp(cand_log)
            risk, grad = _risk_and_grad(cand[None, :], dist, kind, H)
            f_new = float(risk[0])
            kl = float(np.sum(cand * (cand_log - logth)))
            if f_new <= f + g @ (cand - th) + kl / eta + 1e-15 * (1 + abs(f)):
                break
            eta *= 0.5
            if eta < 1e-18:
                # a kink of a piecewise-linear risk: no further certified progress
                return best[1], best[0], best[2], it
        logth, th, f, g = cand_log, cand, f_new, grad[0]
        if f < best[0]:
            best = (f, th, first_order_gap(th, g, lam))
    return best[1], best[0], best[2], max_iter


def batch_minimizer(dist: FiniteDistribution, loss, basis: BaseClass, lam: float,
                    tol: float = 1e-8, max_iter: int = 1_000_000) -> BatchResult:
    """Minimize the exact risk over the lambda-simplex.

    Entropic mirror descent runs until the first-order gap drops below
    ``tol``.  Piecewise-linear (hinge) risks are also solved exactly as a
    linear program, since a sub-gradient gap need not vanish at a kink.
    For ``M <= 3`` a grid of step ``1e-3`` is searched as well.  The best
    candidate is returned.
    """
    kind = _check_pairing(dist, loss)
    H = basis.evaluate_many(dist.xs)
    M = H.shape[1]
    # the LP below certifies hinge problems, so descent only needs to get close
    cap = min(max_iter, 20_000) if kind == "hinge" else max_iter
    th, val, gap, iters = _entropic_descent(dist, kind, H, lam, tol, cap)
    candidates = [(val, th, gap, "mirror-descent")]
    certified = gap < tol
    if kind == "hinge":
        lp = _hinge_lp(dist, H, lam)
        if lp is not None:
            lp = lp * (lam / lp.sum())
            r, gr = _risk_and_grad(lp[None, :], dist, kind, H)
            candidates.append((float(r[0]), lp, first_order_gap(lp, gr[0], lam), "linear-program"))
            certified = True
    if M <= 3:
        gth, gval = _grid_minimum(dist, kind, H, lam, M)
        _, gr = _risk_and_grad(gth[None, :], dist, kind, H)
        candidates.append((gval, gth, first_order_gap(gth, gr[0], lam), "grid"))
    if not certified:
        raise NumericalError("batch minimizer did not reach its first-order tolerance",
                             iterations=iters, gap=gap, tol=tol)
    val, th, gap, method = min(candidates, key=lambda c: c[0])
    return BatchResult(Weights(th, lam, renormalize=True), val, gap, method, iters)


# -- bounds ----------------------------------------------------------------------------


def theoretical_bound(kind: str, t: int, M: Optional[int] = None, lam: float = 1.0,
                      L: float = 1.0, alpha: Optional[float] = None,
                      Vbar: Optional[float] = None) -> float:
    """Excess-risk bounds.

    ``anytime-thm1``:  ``2 lam L sqrt(ln M) sqrt(t+1) / t``
    ``fixed-horizon``: ``lam L sqrt(2 ln M / t)``, or ``L sqrt(2 Vbar / (alpha t))``
    when ``alpha`` and ``Vbar`` are given
    ``general-thm2``:  ``2 L sqrt(Vbar / alpha) sqrt(t+1) / t``
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if not L > 0:
        raise DomainError("L must be positive")
    if kind == "general-thm2":
        if alpha is None or Vbar is None or not (alpha > 0 and Vbar > 0):
            raise DomainError("general-thm2 needs positive alpha and Vbar")
        return 2.0 * L * math.sqrt(Vbar / alpha) * math.sqrt(t + 1) / t
    if kind == "fixed-horizon" and alpha is not None and Vbar is not None:
        return L * math.sqrt(2.0 * Vbar / (alpha * t))
    if kind not in ("anytime-thm1", "fixed-horizon"):
        raise DomainError(f"unknown bound kind {kind!r}")
    if M is None or M < 2:
        raise DomainError(f"simplex bounds need M >= 2, got {M}")
    if kind == "anytime-thm1":
        return 2.0 * lam * L * math.sqrt(math.log(M)) * math.sqrt(t + 1) / t
    return lam * L * math.sqrt(2.0 * math.log(M) / t)


def schedule_bound(schedule: Schedule, proxy: ProxyFunction, t: int, L: float,
                      theta_ref: Optional[Weights] = None) -> float:
    """Right-hand side of the averaged-regret bound for a given schedule:

    ``(beta_t V(ref) - beta_0 V(theta*) + L^2 sum gamma_i^2 / (2 alpha beta_{i-1})) / sum gamma_i``

    ``theta_ref`` defaults to the worst case over the simplex (``V = vmax``).
    """
    gam = np.array([schedule.gamma(i) for i in range(1, t + 1)])
    bprev = np.array([schedule.beta(i) for i in range(0, t)])
    vref = proxy.vmax if theta_ref is None else proxy.value(theta_ref)
    head = schedule.beta(t) * vref - schedule.beta(0) * proxy.value(proxy.minimizer)
    quad = L ** 2 * np.sum(gam ** 2 / (2.0 * proxy.alpha * bprev))
    return float((head + quad) / gam.sum())


# -- diagnostics -----------------------------------------------------------------


@dataclass
class RegretReport:
    max_violation: float
    violations: list
    mean_excess: Optional[float] = None
    stderr: Optional[float] = None
    expectation_bound: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.max_violation <= 1e-8


def regret_violation(traj: Trajectory, dist: FiniteDistribution, loss, basis: BaseClass,
                     proxy: ProxyFunction, points: Optional[Sequence] = None) -> float:
    """Largest ``LHS - RHS`` of the path-wise regret inequality

    ``sum g_i (theta_{i-1} - th).gradA(theta_{i-1})
        <= beta_t V(th) - beta_0 V(theta*) - sum g_i (theta_{i-1} - th).xi_i
           + sum g_i^2 |u_i|_inf^2 / (2 alpha beta_{i-1})``

    over ``points`` (default: every vertex of the simplex).
    """
    kind = _check_pairing(dist, loss)
    H = basis.evaluate_many(dist.xs)
    _, G = _risk_and_grad(traj.thetas, dist, kind, H)
    xi = traj.us - G
    gam = traj.gammas
    bprev = np.concatenate([[traj.beta0], traj.betas[:-1]])
    beta_t = traj.betas[-1]
    quad = np.sum(gam ** 2 * np.max(np.abs(traj.us), axis=1) ** 2 / (2.0 * proxy.alpha * bprev))
    base = quad - traj.beta0 * proxy.value(proxy.minimizer)
    if points is None:
        points = [Weights.vertex(k, proxy.M, proxy.lam) for k in range(proxy.M)]
    lhs_path = gam @ np.einsum("ij,ij->i", traj.thetas, G)
    noise_path = gam @ np.einsum("ij,ij->i", traj.thetas, xi)
    worst = -math.inf
    for th in points:
        v = np.asarray(th, dtype=float)
        lhs = lhs_path - (gam @ G) @ v
        noise = noise_path - (gam @ xi) @ v
        rhs = beta_t * proxy.value(th if isinstance(th, Weights) else Weights(v, proxy.lam)) \
            + base - noise
        worst = max(worst, lhs - rhs)
    return float(worst)


def regret_diagnostic(logs, dist: FiniteDistribution, loss, basis: BaseClass,
                      proxy: ProxyFunction, schedule: Optional[Schedule] = None,
                      L: Optional[float] = None, optimum: Optional[BatchResult] = None) -> RegretReport:
    """Check the path-wise regret inequality on every logged run.

    With several runs, a ``schedule`` and a sub-gradient bound ``L``, also
    compares the replicate mean of the exact excess risk of the averaged
    estimate against the expectation bound at ``theta*_A``.
    """
    if isinstance(logs, Trajectory) or logs is None:
        logs = [logs]
    if any(tr is None for tr in logs):
        raise UsageError("regret diagnostic needs runs executed with log=True")
    violations = [regret_violation(tr, dist, loss, basis, proxy) for tr in logs]
    report = RegretReport(max(violations), violations)
    if schedule is not None and L is not None:
        lam = proxy.lam
        opt = optimum or batch_minimizer(dist, loss, basis, lam)
        excess = np.array([exact_phi_risk(batch_average(tr), dist, loss, basis) - opt.value
                           for tr in logs])
        report.mean_excess = float(excess.mean())
        report.stderr = float(excess.std(ddof=1) / math.sqrt(excess.size)) if excess.size > 1 else 0.0
        report.expectation_bound = schedule_bound(schedule, proxy, logs[0].t, L, opt.theta)
    return report


def noise_check(dist: FiniteDistribution, loss, basis: BaseClass, theta, n_draws: int,
                seed: int = 0):
    """Mean and standard error of ``xi = u - gradA`` over ``n_draws`` samples at ``theta``.

    Returns ``(mean, stderr, max_abs_z)``.
    """
    kind = _check_pairing(dist, loss)
    H = basis.evaluate_many(dist.xs)
    th = np.asarray(theta, dtype=float)
    stream = SampleStream(dist, seed)
    idx = np.array([stream.draw_index() for _ in range(n_draws)])
    _, G = _risk_and_grad(th[None, :], dist, kind, H)
    f = H[idx] @ th
    if kind == "squared":
        U = (2.0 * (f - dist.ys[idx]))[:, None] * H[idx]
    else:
        y = dist.ys[idx]
        U = (loss_derivative(kind, y * f) * y)[:, None] * H[idx]
    xi = U - G[0]
    mean = xi.mean(axis=0)
    se = xi.std(axis=0, ddof=1) / math.sqrt(n_draws)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, np.abs(mean) / se, np.where(mean == 0, 0.0, np.inf))
    return mean, se, float(z.max())


# -- experiments -------------------------------------------------------------------


@dataclass
class RiskReport:
    algorithm: str
    t: int
    phi_risk: float
    excess: float
    stderr: float
    misclassification: float
    bound: float
    M: int
    lam: float
    replicates: int

    def csv_row(self):
        return [self.algorithm, str(self.t), _fmt(self.excess), _fmt(self.stderr),
                _fmt(self.bound), _fmt(self.misclassification)]


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass
class ExperimentConfig:
    distribution: dict = field(default_factory=lambda: {"type": "benchmark-classification"})
    basis: Optional[dict] = None
    loss: str = "hinge"
    lam: float = 1.0
    schedule: str = "anytime"
    algorithm: str = "smd"
    t_grid: list = field(default_factory=lambda: [10, 100, 1000])
    replicates: int = 200
    seed: int = 0
    out: Optional[str] = None
    proxy: str = "entropy"
    schedule_scale: float = 1.0
    workers: int = 1
    response_bound: Optional[float] = None

    def __post_init__(self):
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        grid = [int(t) for t in self.t_grid]
        if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError(f"t_grid must be strictly increasing positive integers, got {self.t_grid}")
        self.t_grid = grid
        if self.schedule in ("fixed", "fixed-horizon"):
            self.schedule = "fixed"
        elif self.schedule != "anytime":
            raise DomainError(f"unknown schedule {self.schedule!r}")
        if self.algorithm not in ("smd", "eg", "sgd"):
            raise DomainError(f"unknown algorithm {self.algorithm!r}")
        if not self.lam > 0:
            raise DomainError("lambda must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON in {path}: {exc}") from None
        return cls.from_dict(payload)

    def to_dict(self) -> dict:
        return asdict(self)


def build_problem(config: ExperimentConfig):
    """Materialize ``(distribution, basis)`` from the config."""
    params = dict(config.distribution)
    kind = params.pop("type", "benchmark-classification")
    basis = None
    if kind == "benchmark-classification":
        dist, basis = data_mod.benchmark_classification(**params)
    elif kind == "benchmark-regression":
        dist, basis = data_mod.benchmark_regression(**params)
    elif kind == "csv":
        dist = data_mod.load_dataset(params["path"], kind=params.get("kind", "classification"),
                                     header=params.get("header", False))
    elif kind == "atoms":
        dist = FiniteDistribution(params["x"], params["y"], params["p"], params.get("kind", "classification"))
    else:
        raise DomainError(f"unknown distribution type {kind!r}")
    if config.basis is not None:
        bparams = dict(config.basis)
        if bparams.pop("type", "stumps") != "stumps":
            raise DomainError("only stump bases can be configured")
        basis = data_mod.stump_basis(bparams["dim"], bparams["thresholds"], bparams.get("symmetric", True))
    if basis is None:
        raise DomainError("a basis is required for this distribution")
    return dist, basis


def _replicate_seed(base: int, r: int) -> int:
    ss = np.random.SeedSequence(int(base), spawn_key=(r,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class _Setup:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.dist, self.basis = build_problem(config)
        lam, M, K = config.lam, self.basis.M, self.basis.K
        self.loss = "squared" if self.dist.kind == "regression" else config.loss
        _check_pairing(self.dist, self.loss)
        if self.dist.kind == "regression":
            ymax = float(np.abs(self.dist.ys).max())
            if config.response_bound is not None:
                if config.response_bound < ymax:
                    raise DomainError(f"response_bound {config.response_bound} is below max |y| = {ymax}")
                ymax = float(config.response_bound)
            self.L = regression_lipschitz(lam, K, ymax)
            self.oracle = regression_oracle(self.basis, lam, ymax)
        else:
            self.L = lipschitz_constant(self.loss, lam, K)
            self.oracle = classification_oracle(self.loss, self.basis, lam)
        proxy_kind = "euclidean" if config.algorithm == "sgd" and config.proxy == "entropy" else config.proxy
        self.proxy = make_proxy(proxy_kind, lam, M)
        self.bound_proxy = make_proxy(config.proxy, lam, M)
        self.optimum = batch_minimizer(self.dist, self.loss, self.basis, lam)
        self.H = self.basis.evaluate_many(self.dist.xs)

    def schedule(self, t=None) -> Schedule:
        p = self.bound_proxy
        if self.config.schedule == "anytime":
            av = None if p.kind == "entropy" else p.alpha * p.vmax
            s = make_schedule_anytime(self.L, p.M, alpha_vbar=av)
        else:
            s = make_schedule_fixed_horizon(self.L, p.alpha, p.vmax, t)
        return s if self.config.schedule_scale == 1.0 else s.scaled(self.config.schedule_scale)

    def bound(self, t) -> float:
        p, c = self.bound_proxy, self.config
        entropy_cls = p.kind == "entropy" and self.dist.kind == "classification"
        if c.schedule == "anytime":
            if entropy_cls:
                return theoretical_bound("anytime-thm1", t, p.M, c.lam, self.L)
            return theoretical_bound("general-thm2", t, p.M, c.lam, self.L, p.alpha, p.vmax)
        if entropy_cls:
            return theoretical_bound("fixed-horizon", t, p.M, c.lam, self.L)
        return theoretical_bound("fixed-horizon", t, p.M, c.lam, self.L, p.alpha, p.vmax)

    def risk(self, theta):
        r, _ = _risk_and_grad(np.asarray(theta)[None, :], self.dist, self.loss, self.H, False)
        return float(r[0])

    def engine_config(self, t=None):
        algo = {"smd": "smd-averaged", "eg": "eg", "sgd": "projected-sgd"}[self.config.algorithm]
        return EngineConfig(self.proxy, self.schedule(t), None, algo)


def _labels(algorithm):
    return ["eg-avg", "eg-last"] if algorithm == "eg" else [algorithm]


def _one_replicate(setup: _Setup, r: int):
    """Return ``{(label, t): (risk, misclass)}`` for replicate ``r``."""
    c = setup.config
    seed = _replicate_seed(c.seed, r)
    out = {}
    try:
        if c.schedule == "anytime":
            jobs = [(max(c.t_grid), c.t_grid)]
        else:
            jobs = [(t, [t]) for t in c.t_grid]
        for horizon, marks in jobs:
            cfg = setup.engine_config(horizon)
            res = run(cfg, SampleStream(setup.dist, seed), setup.oracle, horizon,
                      checkpoints=marks)
            for t in marks:
                state = res.checkpoints[t]
                out[(_labels(c.algorithm)[0], t)] = state.theta_hat.values
                if c.algorithm == "eg":
                    out[("eg-last", t)] = state.theta.values
    except NumericalError as exc:
        raise NumericalError(f"replicate {r} (seed {seed}): {exc}") from exc
    return {k: (setup.risk(th), misclassification(th, setup.dist, setup.basis)
                if setup.dist.kind == "classification" else float("nan"))
            for k, th in out.items()}


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None,
                   out=None) -> list[RiskReport]:
    """Replicate-averaged excess risk of the configured algorithm on a t-grid.

    Replicate ``r`` draws from its own stream seeded by
    ``SeedSequence(seed, spawn_key=(r,))``; results are reduced in replicate
    order, so the output does not depend on ``workers``.
    """
    setup = _Setup(config)
    n = config.replicates
    workers = workers or config.workers
    if workers == 1:
        results = [_one_replicate(setup, r) for r in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _one_replicate(setup, r), range(n)))
    reports = []
    for label in _labels(config.algorithm):
        for t in config.t_grid:
            risks = np.array([res[(label, t)][0] for res in results])
            mis = np.array([res[(label, t)][1] for res in results])
            excess = risks - setup.optimum.value
            se = float(excess.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
            reports.append(RiskReport(label, t, float(risks.mean()), float(excess.mean()), se,
                                      float(mis.mean()), setup.bound(t), setup.basis.M,
                                      config.lam, n))
    target = out if out is not None else config.out
    if target is not None:
        write_csv(reports, target)
    return reports


def reports_to_csv(reports: Sequence[RiskReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        w.writerow(rep.csv_row())
    return buf.getvalue()


def write_csv(reports: Sequence[RiskReport], path) -> None:
    Path(path).write_text(reports_to_csv(reports), encoding="utf-8")
