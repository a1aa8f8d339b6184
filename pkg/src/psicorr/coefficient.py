"""Multiple-correlation coefficients.

The headline quantity is the dependent-variable-free coefficient

    psi = sqrt(1 - det(V)^(2/p)),

where V is the p x p correlation matrix. Also provided for comparison:
the classical coefficient rho (for a chosen dependent variable), its
average/max aggregates over all choices, and the unnormalized variant
psi_star = sqrt(1 - det(V)).
"""

from __future__ import annotations

import warnings

import numpy as np

from .exceptions import DimensionError, NumericDegeneracyError, SingularBlockError
from .linalg import (
    check_correlation,
    check_data_matrix,
    correlation_from_cov,
    log_det_psd,
    sample_mean_cov,
)


def _as_correlation(data_or_V):
    """Accept either an n x p data matrix or a p x p correlation matrix."""
    M = np.asarray(data_or_V, dtype=float)
    if (
        M.ndim == 2
        and M.shape[0] == M.shape[1]
        and np.allclose(np.diag(M), 1.0, atol=1e-8)
        and np.allclose(M, M.T, atol=1e-8)
    ):
        return check_correlation(M)
    X = check_data_matrix(M)
    _, cov = sample_mean_cov(X)
    return correlation_from_cov(cov)


def psi_from_correlation(V):
    """psi = sqrt(1 - det(V)^(2/p)), evaluated through the log-determinant.

    A numerically singular V (log-det sentinel) gives exactly 1.0.
    """
    V = check_correlation(V, check_psd=False)
    p = V.shape[0]
    if p < 2:
        raise DimensionError(f"need p >= 2 variables, got {p}")
    ld = log_det_psd(V)
    if ld == -np.inf:
        return 1.0
    inner = 1.0 - np.exp((2.0 / p) * ld)
    return float(np.sqrt(min(max(inner, 0.0), 1.0)))


def psi_hat(data):
    """Sample coefficient: psi of the sample correlation matrix.

    Warns when p >= n (the asymptotic theory assumes p < n) but still
    computes the value whenever the sample correlation is nonsingular.
    """
    X = check_data_matrix(data)
    n, p = X.shape
    if p >= n:
        warnings.warn(
            f"p={p} >= n={n}: sample coefficient computed, but asymptotic "
            "theory requires p < n",
            stacklevel=2,
        )
    _, cov = sample_mean_cov(X)
    return psi_from_correlation(correlation_from_cov(cov))


def classical_rho(data_or_V, dep_index):
    """Classical multiple correlation of variable ``dep_index`` (0-based) on
    the rest.

    Evaluated both as the quadratic form sigma12' Sigma22^{-1} sigma12 /
    sigma11 and as the determinant ratio sqrt(1 - det(V)/det(V22)); the two
    must agree to 1e-10, and the determinant-ratio value is returned.
    """
    V = _as_correlation(data_or_V)
    p = V.shape[0]
    if not 0 <= dep_index < p:
        raise DimensionError(f"dep_index {dep_index} out of range for p={p}")
    others = [j for j in range(p) if j != dep_index]
    sigma11 = V[dep_index, dep_index]
    sigma12 = V[others, dep_index]
    V22 = V[np.ix_(others, others)]

    ld22 = log_det_psd(V22)
    if ld22 == -np.inf:
        raise SingularBlockError(
            f"correlation of the non-dependent block (excluding {dep_index}) "
            "is singular"
        )
    try:
        quad = float(sigma12 @ np.linalg.solve(V22, sigma12)) / sigma11
    except np.linalg.LinAlgError as exc:
        raise SingularBlockError(str(exc)) from exc
    rho_quad = np.sqrt(min(max(quad, 0.0), 1.0))

    ld = log_det_psd(V)
    ratio = 0.0 if ld == -np.inf else np.exp(ld - ld22)
    rho_det = np.sqrt(min(max(1.0 - ratio, 0.0), 1.0))

    if abs(rho_quad - rho_det) > 1e-10:
        raise NumericDegeneracyError(
            f"quadratic-form and determinant-ratio evaluations disagree: "
            f"{rho_quad} vs {rho_det}"
        )
    return float(rho_det)


def rho_aggregate(data_or_V, mode):
    """Average ('average') or maximum ('max') of the p classical coefficients."""
    if mode not in ("average", "max"):
        raise ValueError(f"mode must be 'average' or 'max', got {mode!r}")
    V = _as_correlation(data_or_V)
    rhos = [classical_rho(V, j) for j in range(V.shape[0])]
    return float(np.mean(rhos)) if mode == "average" else float(max(rhos))


def psi_star(V):
    """Unnormalized variant sqrt(1 - det(V)).

    Tends to 1 as p grows even under weak pairwise correlation, which is
    why psi uses det(V)^(2/p) instead.
    """
    V = check_correlation(V, check_psd=False)
    if V.shape[0] < 2:
        raise DimensionError("need p >= 2 variables")
    ld = log_det_psd(V)
    if ld == -np.inf:
        return 1.0
    inner = 1.0 - np.exp(ld)
    return float(np.sqrt(min(max(inner, 0.0), 1.0)))
