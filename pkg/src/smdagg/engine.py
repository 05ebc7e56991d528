"""Stochastic mirror descent with averaging, plus EG and projected-SGD baselines.

One iteration ``i`` of the averaged mirror-descent recursion reads::

    zeta_i     = zeta_{i-1} + gamma_i * u_i(theta_{i-1})
    theta_i    = -grad W_{beta_i}(zeta_i)
    theta_hat_i = theta_hat_{i-1} + gamma_i / sum_{k<=i} gamma_k * (theta_{i-1} - theta_hat_{i-1})

so the average after ``t`` steps is the gamma-weighted mean of the
pre-update iterates ``theta_0, ..., theta_{t-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .errors import DataExhaustedError, DomainError
from .losses import GeneralLossOracle
from .proxy import ProxyFunction
from .simplex import Schedule, Weights, project_simplex

ALGORITHMS = ("smd-averaged", "eg", "projected-sgd")
_ALIASES = {"smd": "smd-averaged", "sgd": "projected-sgd"}


@dataclass(frozen=True)
class EngineConfig:
    proxy: ProxyFunction
    schedule: Schedule
    theta0: Optional[Weights] = None
    algorithm: str = "smd-averaged"

    def __post_init__(self):
        algo = _ALIASES.get(self.algorithm, self.algorithm)
        if algo not in ALGORITHMS:
            raise DomainError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        object.__setattr__(self, "algorithm", algo)
        theta0 = self.theta0 if self.theta0 is not None else self.proxy.minimizer
        if not isinstance(theta0, Weights):
            theta0 = Weights(theta0, self.proxy.lam)
        if theta0.M != self.proxy.M or abs(theta0.mass - self.proxy.lam) > 1e-12:
            raise DomainError("theta0 must lie on the proxy's simplex "
                              f"(M={self.proxy.M}, lambda={self.proxy.lam})")
        if algo == "eg" and np.any(theta0.values <= 0):
            raise DomainError("exponentiated gradient needs a strictly positive theta0")
        object.__setattr__(self, "theta0", theta0)

    @property
    def M(self) -> int:
        return self.proxy.M

    @property
    def lam(self) -> float:
        return self.proxy.lam


@dataclass(frozen=True)
class EngineState:
    """Iterate after ``iter`` steps.

    ``zeta`` and ``gamma_sum`` are kept in units of ``schedule.scale``
    (they equal the dual accumulator and the step-size sum when the scale
    is 1).
    """

    zeta: np.ndarray
    theta: Weights
    theta_hat: Weights
    iter: int = 0
    gamma_sum: float = 0.0


def init(config: EngineConfig) -> EngineState:
    return EngineState(np.zeros(config.M), config.theta0, config.theta0, 0, 0.0)


def _check_u(u, M):
    u = np.asarray(u, dtype=float)
    if u.shape != (M,):
        raise DomainError(f"sub-gradient has shape {u.shape}, expected ({M},)")
    return u


def _average(state, g, lam):
    gsum = state.gamma_sum + g
    hat = state.theta_hat.values
    hat = hat + (g / gsum) * (state.theta.values - hat)
    return Weights(hat, lam), gsum


def step(state: EngineState, u, config: EngineConfig) -> EngineState:
    """One step of the configured algorithm."""
    if config.algorithm == "eg":
        return eg_step(state, u, config)
    if config.algorithm == "projected-sgd":
        return sgd_step(state, u, config)
    u = _check_u(u, config.M)
    i = state.iter + 1
    sched = config.schedule
    g = sched.unit_gamma(i)
    zeta = state.zeta + g * u
    theta = config.proxy.mirror_map(zeta, sched.unit_beta(i)).theta
    hat, gsum = _average(state, g, config.lam)
    return EngineState(zeta, theta, hat, i, gsum)


def eg_step(state: EngineState, u, config: EngineConfig) -> EngineState:
    """Exponentiated gradient: ``theta_i ~ theta_{i-1} exp(-gamma_i u)``.

    Evaluated through the telescoped product ``theta_0 exp(-sum gamma u)``
    so long runs cannot underflow.
    """
    u = _check_u(u, config.M)
    i = state.iter + 1
    sched = config.schedule
    g = sched.unit_gamma(i)
    zeta = state.zeta + g * u
    a = np.log(config.theta0.values) - sched.scale * zeta
    a -= a.max()
    w = np.exp(a)
    theta = Weights(config.lam * w / w.sum(), config.lam)
    hat, gsum = _average(state, g, config.lam)
    return EngineState(zeta, theta, hat, i, gsum)


def sgd_step(state: EngineState, u, config: EngineConfig) -> EngineState:
    """Projected SGD: ``theta_i = Proj(theta_{i-1} - gamma_i u)`` with exact l2 projection."""
    u = _check_u(u, config.M)
    i = state.iter + 1
    sched = config.schedule
    g = sched.unit_gamma(i)
    step_size = sched.scale * g
    moved = state.theta.values - step_size * u
    theta = Weights(project_simplex(moved, config.lam), config.lam, renormalize=True)
    hat, gsum = _average(state, g, config.lam)
    return EngineState(state.zeta + g * u, theta, hat, i, gsum)


# -- driving a run ---------------------------------------------------------------


@dataclass
class Trajectory:
    """Per-iteration record: ``thetas[i-1]`` is the point where ``us[i-1]`` was queried."""

    thetas: np.ndarray
    us: np.ndarray
    atoms: np.ndarray
    gammas: np.ndarray
    betas: np.ndarray
    beta0: float

    @property
    def t(self) -> int:
        return self.us.shape[0]


@dataclass
class RunResult:
    theta_hat: Weights
    state: EngineState
    checkpoints: dict = field(default_factory=dict)
    trajectory: Optional[Trajectory] = None


OracleLike = Union[GeneralLossOracle, Callable]


def run(config: EngineConfig, stream, oracle: OracleLike, t: int, log: bool = False,
        checkpoints: Iterable[int] = (), step_fn=None) -> RunResult:
    """Run ``t`` iterations drawing one observation each; return ``theta_hat_t``.

    ``oracle`` is a :class:`GeneralLossOracle` or a callable
    ``(theta, z) -> u``; ``z`` is the ``(x, y)`` pair from the stream.
    ``checkpoints`` collects the full state after each listed iteration.
    """
    if t < 1:
        raise DomainError(f"number of iterations must be >= 1, got {t}")
    subgrad = oracle.subgrad if isinstance(oracle, GeneralLossOracle) else oracle
    step_fn = step_fn or step
    marks = set(int(c) for c in checkpoints)
    state = init(config)
    sched = config.schedule
    traj = None
    if log:
        M = config.M
        traj = Trajectory(np.empty((t, M)), np.empty((t, M)), np.empty(t, dtype=int),
                          np.empty(t), np.empty(t), sched.beta(0))
    saved = {}
    for i in range(1, t + 1):
        try:
            idx = stream.draw_index()
        except DataExhaustedError as exc:
            raise DataExhaustedError(f"iteration {i}: {exc}") from None
        z = stream.distribution.atom(idx)
        u = _check_u(subgrad(state.theta.values, z), config.M)
        if traj is not None:
            traj.thetas[i - 1] = state.theta.values
            traj.us[i - 1] = u
            traj.atoms[i - 1] = idx
            traj.gammas[i - 1] = sched.gamma(i)
            traj.betas[i - 1] = sched.beta(i)
        state = step_fn(state, u, config)
        if i in marks:
            saved[i] = state
    return RunResult(state.theta_hat, state, saved, traj)


def gibbs_from_log(traj: Trajectory, i: int, lam: float) -> np.ndarray:
    """Closed-form entropy iterate ``theta_i`` rebuilt from logged sub-gradients."""
    zeta = (traj.gammas[:i, None] * traj.us[:i]).sum(axis=0)
    a = -zeta / traj.betas[i - 1]
    a -= a.max()
    e = np.exp(a)
    return lam * e / e.sum()


def batch_average(traj: Trajectory) -> np.ndarray:
    """``sum gamma_i theta_{i-1} / sum gamma_i`` recomputed from the log."""
    return (traj.gammas[:, None] * traj.thetas).sum(axis=0) / traj.gammas.sum()

