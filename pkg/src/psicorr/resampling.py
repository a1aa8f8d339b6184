"""Permutation and bootstrap inference.

Two distinct schemes by necessity:

* Null p-value for the independence hypothesis: each column is permuted
  (or bootstrapped) independently, destroying cross-column dependence
  while preserving marginals.
* Confidence interval: whole rows are resampled with replacement,
  preserving dependence; the interval is built on the bias-corrected
  log(1 - psi^2) scale and transformed back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import (
    ConfidenceInterval,
    NullZEvaluator,
    delta_nu,
    estimate_kappa,
    estimate_tau,
    standardize_columns,
)
from .exceptions import DegenerateVariableError, DimensionError, InvalidParameterError
from .linalg import check_data_matrix, correlation_from_cov, sample_mean_cov
from .coefficient import psi_from_correlation

PERMUTATION = "permutation"
BOOTSTRAP = "bootstrap"


@dataclass(frozen=True)
class ResamplePlan:
    method: str
    B: int
    seed: int = 0

    def __post_init__(self):
        if self.method not in (PERMUTATION, BOOTSTRAP):
            raise InvalidParameterError(f"unknown resampling method {self.method!r}")
        if self.B < 100:
            raise InvalidParameterError(f"need B >= 100 replications, got {self.B}")


def null_resample_pvalue(data, plan, return_details=False):
    """Resampling p-value for the independence hypothesis.

    Columns are resampled independently under the null; the add-one
    estimator (1 + #{|Z_b| >= |Z_1|}) / (B + 1) is returned.
    """
    X = check_data_matrix(data)
    n, p = X.shape
    if p >= n:
        raise DimensionError(f"need p < n, got p={p}, n={n}")
    evaluator = NullZEvaluator(n, p)
    Xs = standardize_columns(X)
    z1 = abs(evaluator.z_from_standardized(Xs))
    rng = np.random.default_rng(np.random.SeedSequence(plan.seed))
    count = 0
    for _ in range(plan.B):
        if plan.method == PERMUTATION:
            Xb = rng.permuted(Xs, axis=0)
        else:
            # bootstrap breaks the column standardization; restandardize
            idx = rng.integers(0, n, size=(n, p))
            Xb = np.take_along_axis(X, idx, axis=0)
            try:
                Xb = standardize_columns(Xb)
            except DegenerateVariableError:
                count += 1  # constant column: maximally degenerate resample
                continue
        zb = evaluator.z_from_standardized(Xb)
        if math.isinf(zb) or abs(zb) >= z1:
            count += 1
    pvalue = (1.0 + count) / (plan.B + 1.0)
    if return_details:
        return pvalue, z1
    return pvalue


def _log_scale_estimate(X):
    """Bias-corrected log(1 - psi_hat^2) for one (re)sample."""
    n, p = X.shape
    _, cov = sample_mean_cov(X)
    V_hat = correlation_from_cov(cov)
    psi = psi_from_correlation(V_hat)
    if psi == 1.0:
        return -np.inf
    kappa = estimate_kappa(X)
    tau = estimate_tau(V_hat, n)
    delta = delta_nu(n, p, kappa, tau)
    return math.log1p(-(psi**2)) - delta


def bootstrap_ci(data, B=2000, level=0.95, seed=0):
    """Percentile bootstrap confidence interval for psi.

    Rows are resampled jointly; each resample contributes its
    bias-corrected log(1 - psi^2); the percentile interval on that scale
    is transformed back through psi = sqrt(1 - exp(.)).
    """
    X = check_data_matrix(data)
    n, p = X.shape
    if p >= n:
        raise DimensionError(f"need p < n, got p={p}, n={n}")
    if B < 100:
        raise InvalidParameterError(f"need B >= 100, got {B}")
    if not 0.0 < level < 1.0:
        raise InvalidParameterError(f"level must be in (0,1), got {level}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    values = np.empty(B)
    for b in range(B):
        for attempt in range(10):
            idx = rng.integers(0, n, size=n)
            Xb = X[idx]
            if np.all(Xb.var(axis=0) > 0.0):
                break
        else:
            raise DegenerateVariableError(
                -1, "bootstrap resample kept producing constant columns"
            )
        values[b] = _log_scale_estimate(Xb)
    alpha = 1.0 - level
    lo_q, hi_q = np.quantile(values, [alpha / 2.0, 1.0 - alpha / 2.0])
    # small log(1-psi^2) corresponds to large psi, so quantiles swap roles
    upper = math.sqrt(min(max(1.0 - math.exp(lo_q), 0.0), 1.0)) if lo_q > -np.inf else 1.0
    lower = math.sqrt(min(max(1.0 - math.exp(hi_q), 0.0), 1.0)) if hi_q > -np.inf else 1.0
    if lower > upper:
        lower, upper = upper, lower
    return ConfidenceInterval(lower=lower, upper=upper, level=level, method="bootstrap")
