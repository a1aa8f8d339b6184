"""Stochastic approximation Monte Carlo p-value for the independence test.

The sampler partitions the range of |Z| into m regions (the last one
being the observed tail [|Z_1|, inf)), adapts log-weights theta so the
chain visits regions near-uniformly, and reads the p-value off the
final weight of the tail region. Moves are partial within-column
permutations: a fraction varpi of the columns, and within each a
fraction varpi of the rows, are permuted per iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import NullZEvaluator, logdet_psd_fast, standardize_columns
from .exceptions import (
    DimensionError,
    InvalidParameterError,
    NumericDegeneracyError,
)
from .linalg import check_data_matrix


@dataclass(frozen=True)
class SamcConfig:
    m: int = 300
    t0: int = 1000
    T: int = 1_000_000
    varpi: float = 0.2
    seed: int = 0
    incremental: bool = False  # reuse the Gram matrix across iterations

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameterError(f"need m >= 2 regions, got {self.m}")
        if self.T < self.t0:
            raise InvalidParameterError(f"need T >= t0, got T={self.T}, t0={self.t0}")
        if not 0.0 < self.varpi <= 1.0:
            raise InvalidParameterError(f"varpi must be in (0,1], got {self.varpi}")


@dataclass(frozen=True)
class RegionPartition:
    """m half-open regions [k|Z1|/(m-1), (k+1)|Z1|/(m-1)) on |Z|, the last
    being [|Z1|, inf)."""

    z1_abs: float
    m: int

    def __post_init__(self):
        if self.z1_abs <= 0.0:
            raise NumericDegeneracyError(
                "observed |Z| is 0: data sit at the null mode (p-value ~ 1)"
            )
        if not math.isfinite(self.z1_abs):
            raise NumericDegeneracyError(
                "observed statistic is infinite (singular sample correlation); "
                "the sampler cannot partition an unbounded range"
            )
        if self.m < 2:
            raise InvalidParameterError(f"need m >= 2, got {self.m}")

    @property
    def boundaries(self):
        return self.z1_abs * np.arange(1, self.m) / (self.m - 1)

    def index_of(self, z):
        """0-based region index of a statistic value; values on a cut point
        land in the upper region, non-finite values in the tail region."""
        z_abs = abs(z)
        if not math.isfinite(z_abs):
            return self.m - 1
        j = int(z_abs * (self.m - 1) / self.z1_abs)
        return min(j, self.m - 1)


@dataclass(frozen=True)
class SamcResult:
    p_value: float
    theta: np.ndarray
    visit_counts: np.ndarray
    empty_regions: int
    acceptance_rate: float
    z1_abs: float
    iterations: int


def build_regions(z1_abs, m):
    return RegionPartition(z1_abs=z1_abs, m=m)


def _move_sizes(n, p, varpi):
    # "closest positive integer" with floors that keep the move a real move
    p_star = min(max(int(round(p * varpi)), 1), p)
    n_star = min(max(int(round(n * varpi)), 2), n)
    return n_star, p_star


def propose_update(x, varpi, rng):
    """Partial within-column permutation move.

    Picks p* columns uniformly without replacement; within each, permutes
    the values at n* uniformly chosen row positions. Column multisets are
    preserved exactly.
    """
    if not 0.0 < varpi <= 1.0:
        raise InvalidParameterError(f"varpi must be in (0,1], got {varpi}")
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    n_star, p_star = _move_sizes(n, p, varpi)
    out = x.copy()
    cols = rng.choice(p, size=p_star, replace=False)
    for j in cols:
        rows = rng.choice(n, size=n_star, replace=False)
        out[rows, j] = out[rows[rng.permutation(n_star)], j]
    return out


def _pvalue_from_theta(theta, visits):
    """Final tail-probability estimate from the adapted log-weights."""
    m = theta.shape[0]
    nonempty = visits > 0
    m0 = int(m - nonempty.sum())
    if m0 == m:
        raise NumericDegeneracyError("all regions empty (internal invariant)")
    if not nonempty[-1]:
        raise NumericDegeneracyError("tail region empty (internal invariant)")
    delta = m0 / (m * (m - m0))
    th = theta[nonempty]
    w = np.exp(th - th.max()) * (1.0 / m + delta)
    p_tail = float(np.exp(theta[-1] - th.max()) * (1.0 / m + delta) / w.sum())
    return min(max(p_tail, np.nextafter(0.0, 1.0)), 1.0), m0


def samc_pvalue(data, config):
    """Run the adaptive sampler and estimate P(|Z| >= |Z_1|) under the
    column-permutation null."""
    X = check_data_matrix(data)
    n, p = X.shape
    if p >= n:
        raise DimensionError(f"need p < n, got p={p}, n={n}")
    if not isinstance(config, SamcConfig):
        config = SamcConfig(**config)
    evaluator = NullZEvaluator(n, p)
    # column means/scales are invariant under within-column permutation,
    # so the chain state can live in standardized coordinates
    Xs = standardize_columns(X)
    z1 = abs(evaluator.z_from_standardized(Xs))
    regions = build_regions(z1, config.m)

    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    m = config.m
    theta = np.zeros(m)
    visits = np.zeros(m, dtype=np.int64)
    x_cur = Xs.copy()
    j_cur = regions.index_of(z1)  # == m - 1 by construction
    visits[j_cur] += 1

    gram = x_cur.T @ x_cur if config.incremental else None
    n_star, p_star = _move_sizes(n, p, config.varpi)
    accepted = 0

    for t in range(1, config.T + 1):
        cols = rng.choice(p, size=p_star, replace=False)
        x_prop = x_cur.copy()
        for j in cols:
            rows = rng.choice(n, size=n_star, replace=False)
            x_prop[rows, j] = x_prop[rows[rng.permutation(n_star)], j]

        if config.incremental:
            gram_prop = gram.copy()
            block = x_prop[:, cols].T @ x_prop
            gram_prop[cols, :] = block
            gram_prop[:, cols] = block.T
            logdet = logdet_psd_fast(gram_prop)
        else:
            logdet = logdet_psd_fast(x_prop.T @ x_prop)
        j_prop = regions.index_of(evaluator.z_from_logdet(logdet))

        r = math.exp(min(theta[j_cur] - theta[j_prop], 0.0))
        if r >= 1.0 or rng.random() < r:
            x_cur = x_prop
            j_cur = j_prop
            accepted += 1
            if config.incremental:
                gram = gram_prop

        gamma = min(1.0, config.t0 / t)
        theta -= gamma / m
        theta[j_cur] += gamma
        visits[j_cur] += 1

    p_value, m0 = _pvalue_from_theta(theta, visits)
    return SamcResult(
        p_value=p_value,
        theta=theta,
        visit_counts=visits,
        empty_regions=m0,
        acceptance_rate=accepted / config.T,
        z1_abs=z1,
        iterations=config.T,
    )
