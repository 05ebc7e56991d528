"""Base-function classes, finite-support distributions and seeded sample streams."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DataExhaustedError, DomainError, ParseError

STREAM_BLOCK = 1024


@dataclass(frozen=True)
class BaseClass:
    """Vector of base functions ``H(x) = (h_1(x), ..., h_M(x))`` bounded by ``K``.

    ``fn_many`` maps an ``(n, d)`` array of points to an ``(n, M)`` array;
    every output is checked against the bound.
    """

    M: int
    K: float
    fn_many: Callable[[np.ndarray], np.ndarray]
    description: str = ""

    def __post_init__(self):
        if self.M < 2:
            raise DomainError(f"a base class needs M >= 2 functions, got {self.M}")
        if not self.K > 0:
            raise DomainError(f"bound K must be positive, got {self.K}")

    def evaluate_many(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        H = np.asarray(self.fn_many(X), dtype=float)
        if H.shape != (X.shape[0], self.M):
            raise DomainError(f"base class returned shape {H.shape}, expected {(X.shape[0], self.M)}")
        if np.any(np.abs(H) > self.K):
            raise DomainError(f"base function value exceeds K = {self.K}")
        return H

    def evaluate(self, x) -> np.ndarray:
        return self.evaluate_many(np.asarray(x, dtype=float).reshape(1, -1))[0]


class _Stumps:
    # picklable callable so bases can cross process boundaries
    def __init__(self, dims, taus, symmetric):
        self.dims = np.asarray(dims, dtype=int)
        self.taus = np.asarray(taus, dtype=float)
        self.symmetric = symmetric

    def __call__(self, X):
        H = np.where(X[:, self.dims] >= self.taus, 1.0, -1.0)
        return np.hstack([H, -H]) if self.symmetric else H


def stump_basis(dim: int, thresholds: Sequence[Sequence[float]], symmetric: bool = True) -> BaseClass:
    """Decision stumps ``sign(x_d - tau)`` (with ``sign(0) = +1``).

    ``thresholds[d]`` lists the cut points on coordinate ``d``.  With
    ``symmetric`` the negation of every stump follows the plain stumps.
    """
    if len(thresholds) != dim:
        raise DomainError(f"need one threshold list per coordinate ({dim}), got {len(thresholds)}")
    dims, taus = [], []
    for d, ts in enumerate(thresholds):
        for tau in ts:
            dims.append(d)
            taus.append(float(tau))
    if not taus:
        raise DomainError("stump basis needs at least one threshold")
    M = len(taus) * (2 if symmetric else 1)
    return BaseClass(M, 1.0, _Stumps(dims, taus, symmetric),
                     f"{len(taus)} stumps on {dim} coordinates" + (", symmetric" if symmetric else ""))


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """Finite-support law of ``(X, Y)``: atoms ``xs[i]``, responses ``ys[i]``, weights ``probs[i]``."""

    xs: np.ndarray
    ys: np.ndarray
    probs: np.ndarray
    kind: str = "classification"

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        if xs.ndim == 1:
            xs = xs.reshape(-1, 1)
        ys = np.asarray(self.ys, dtype=float).ravel()
        p = np.asarray(self.probs, dtype=float).ravel()
        if not (xs.shape[0] == ys.size == p.size) or p.size == 0:
            raise DomainError("atoms, responses and probabilities must have equal nonzero length")
        if self.kind not in ("classification", "regression"):
            raise DomainError(f"unknown distribution kind {self.kind!r}")
        if np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("atom probabilities must be positive and sum to 1")
        if self.kind == "classification" and not np.all(np.isin(ys, (-1.0, 1.0))):
            raise DomainError("classification labels must be -1 or +1")
        for arr in (xs, ys, p):
            arr.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "probs", p)

    @classmethod
    def empirical(cls, xs, ys, kind="classification") -> "FiniteDistribution":
        n = len(ys)
        return cls(xs, ys, np.full(n, 1.0 / n), kind)

    @property
    def n_atoms(self) -> int:
        return self.ys.size

    def atom(self, i: int):
        return self.xs[i], (int(self.ys[i]) if self.kind == "classification" else float(self.ys[i]))


@dataclass(eq=False)
class SampleStream:
    """i.i.d. draws from a finite distribution, replayable from ``seed``.

    Uniforms come from numpy's PCG64 in fixed blocks of 1024 and are mapped
    to atoms through the cumulative probabilities, so the index sequence
    depends only on ``(distribution, seed)``.
    """

    distribution: FiniteDistribution
    seed: int = 0
    position: int = 0
    _rng: np.random.Generator = field(init=False, repr=False)
    _cdf: np.ndarray = field(init=False, repr=False)
    _block: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self._cdf = np.cumsum(self.distribution.probs)
        self._block = np.empty(0, dtype=int)
        start, self.position = self.position, 0
        for _ in range(start):
            self.draw_index()

    def draw_index(self) -> int:
        k = self.position % STREAM_BLOCK
        if k == 0:
            u = self._rng.random(STREAM_BLOCK) * self._cdf[-1]
            self._block = np.minimum(np.searchsorted(self._cdf, u, side="right"),
                                     self._cdf.size - 1)
        self.position += 1
        return int(self._block[k])

    def draw(self):
        return self.distribution.atom(self.draw_index())


@dataclass(eq=False)
class ReplayStream:
    """Walks a dataset's atoms once, in file order; raises when exhausted."""

    distribution: FiniteDistribution
    position: int = 0

    def draw_index(self) -> int:
        if self.position >= self.distribution.n_atoms:
            raise DataExhaustedError(
                f"stream exhausted after {self.distribution.n_atoms} observations")
        self.position += 1
        return self.position - 1

    def draw(self):
        return self.distribution.atom(self.draw_index())


def draw(stream):
    return stream.draw()


def load_dataset(path, format: str = "csv", kind: str = "classification",
                 header: bool = False) -> FiniteDistribution:
    """Read ``label, feature_1, ..., feature_d`` rows into an empirical law.

    Every row becomes its own atom with weight ``1/n``; duplicates are kept.
    """
    if format != "csv":
        raise DomainError(f"unsupported dataset format {format!r}")
    xs, ys = [], []
    width = None
    with open(Path(path), newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ParseError("expected a label and at least one feature", lineno)
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise ParseError(f"non-numeric field ({exc})", lineno) from None
            if not all(math.isfinite(v) for v in values):
                raise ParseError("non-finite field", lineno)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(f"expected {width} fields, got {len(values)}", lineno)
            if kind == "classification" and values[0] not in (-1.0, 1.0):
                raise DomainError(f"line {lineno}: label {row[0]!r} is not -1 or +1")
            ys.append(values[0])
            xs.append(values[1:])
    if not ys:
        raise ParseError("dataset has no rows")
    return FiniteDistribution.empirical(np.array(xs), np.array(ys), kind)


def decision_rule(theta, basis: BaseClass, x) -> int:
    """``+1`` iff ``theta.H(x) > 0``; ties go to ``-1``."""
    return 1 if float(np.asarray(theta, dtype=float) @ basis.evaluate(x)) > 0 else -1


# -- fixed benchmark problems --------------------------------------------------

STUMP_CUTS = (0.2, 0.4, 0.6, 0.8)


def benchmark_classification(n_atoms: int = 32, seed: int = 20050101,
                             flip: float = 0.2) -> tuple[FiniteDistribution, BaseClass]:
    """Noisy linear boundary on the unit square, 16 symmetric stumps (K = 1)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    xs = rng.random((n_atoms, 2))
    ys = np.where(xs[:, 0] - 0.8 * xs[:, 1] + 0.1 > 0, 1.0, -1.0)
    ys[rng.random(n_atoms) < flip] *= -1
    probs = rng.dirichlet(np.full(n_atoms, 2.0))
    probs /= probs.sum()
    basis = stump_basis(2, [STUMP_CUTS, STUMP_CUTS], symmetric=True)
    return FiniteDistribution(xs, ys, probs, "classification"), basis


def benchmark_regression(n_atoms: int = 16, seed: int = 20050102,
                         noise: float = 0.3) -> tuple[FiniteDistribution, BaseClass]:
    """Responses in ``[-1, 1]`` on the unit square, 16 symmetric stumps (K = 1)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    xs = rng.random((n_atoms, 2))
    ys = np.clip(np.sin(3.0 * xs[:, 0]) - xs[:, 1] + noise * rng.standard_normal(n_atoms),
                 -1.0, 1.0)
    probs = np.full(n_atoms, 1.0 / n_atoms)
    basis = stump_basis(2, [STUMP_CUTS, STUMP_CUTS], symmetric=True)
    return FiniteDistribution(xs, ys, probs, "regression"), basis

