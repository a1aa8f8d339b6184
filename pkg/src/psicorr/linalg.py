"""Dense symmetric-matrix primitives.

Covariance/correlation construction, PSD log-determinant, symmetric
square root and Hadamard helpers. Everything here is a pure function on
numpy arrays; validation helpers raise the package exceptions.

The log-determinant is always evaluated in log space (Cholesky or
eigenvalue sum), never through the raw determinant, so downstream
quantities like (2/p)*logdet stay finite for p in the thousands.
"""

from __future__ import annotations

import numpy as np

from .exceptions import (
    DataError,
    DegenerateVariableError,
    DimensionError,
    InsufficientSampleError,
    NotPSDError,
    NotSymmetricError,
)

#: relative symmetry tolerance for matrix inputs
SYM_RTOL = 1e-12
#: eigenvalues below this (relative to the largest) count as singular
SINGULAR_REL_EPS = 1e-12
#: numerical PSD floor for correlation matrices
PSD_EIG_FLOOR = -1e-10


def check_data_matrix(values, require_nonconstant=True):
    """Validate an n x p data matrix (rows are observations).

    Returns a float64 copy. Raises on non-finite entries, n < 2, p < 2,
    and (optionally) on constant columns.
    """
    X = np.array(values, dtype=float)
    if X.ndim != 2:
        raise DimensionError(f"data must be 2-dimensional, got ndim={X.ndim}")
    n, p = X.shape
    if n < 2:
        raise InsufficientSampleError(f"need at least 2 observations, got {n}")
    if p < 2:
        raise DimensionError(f"need at least 2 variables, got {p}")
    if not np.all(np.isfinite(X)):
        i, j = np.argwhere(~np.isfinite(X))[0]
        raise DataError(f"non-finite entry at row {i}, column {j}")
    if require_nonconstant:
        var = X.var(axis=0)
        bad = np.flatnonzero(var == 0.0)
        if bad.size:
            raise DegenerateVariableError(int(bad[0]))
    return X


def check_symmetric(M, rtol=SYM_RTOL):
    """Validate and symmetrize a square matrix.

    Asymmetry within ``rtol`` (relative to the largest entry) is removed by
    averaging; anything larger raises NotSymmetricError.
    """
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.T).max() > rtol * scale:
        raise NotSymmetricError("matrix is not symmetric within tolerance")
    return 0.5 * (M + M.T)


def check_correlation(V, rtol=SYM_RTOL, check_psd=True):
    """Validate a correlation matrix: symmetric, unit diagonal, entries in
    [-1, 1], eigenvalues >= -1e-10. The diagonal is set to exactly 1."""
    V = check_symmetric(V, rtol=rtol)
    if np.abs(np.diag(V) - 1.0).max() > 1e-8:
        raise DataError("correlation matrix must have unit diagonal")
    if np.abs(V).max() > 1.0 + 1e-8:
        raise DataError("correlation entries must lie in [-1, 1]")
    np.fill_diagonal(V, 1.0)
    np.clip(V, -1.0, 1.0, out=V)
    if check_psd and np.linalg.eigvalsh(V)[0] < PSD_EIG_FLOOR:
        raise NotPSDError("correlation matrix has a negative eigenvalue")
    return V


def sample_mean_cov(data):
    """Sample mean and covariance with the 1/(n-1) divisor.

    Constant columns are allowed here; they yield zero diagonal entries
    that downstream correlation construction flags.
    """
    X = check_data_matrix(data, require_nonconstant=False)
    mu = X.mean(axis=0)
    Xc = X - mu
    cov = (Xc.T @ Xc) / (X.shape[0] - 1)
    return mu, 0.5 * (cov + cov.T)


def correlation_from_cov(cov):
    """Correlation matrix D^{-1/2} cov D^{-1/2} from a covariance matrix."""
    cov = check_symmetric(cov)
    d = np.diag(cov)
    bad = np.flatnonzero(d <= 0.0)
    if bad.size:
        raise DegenerateVariableError(
            int(bad[0]), f"column {bad[0]} has nonpositive variance {d[bad[0]]}"
        )
    inv_sd = 1.0 / np.sqrt(d)
    V = cov * np.outer(inv_sd, inv_sd)
    np.fill_diagonal(V, 1.0)
    np.clip(V, -1.0, 1.0, out=V)
    return 0.5 * (V + V.T)


def log_det_psd(M):
    """log det of a symmetric PSD matrix, or -inf when numerically singular.

    Tries a Cholesky factorization first (strictly PD fast path); falls
    back to the eigenvalue sum. Any eigenvalue <= 1e-12 * lambda_max maps
    to the -inf sentinel, which callers interpret as singularity.
    """
    M = check_symmetric(M)
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        pass
    else:
        diag = np.diag(L)
        lmax = diag.max() ** 2
        if np.min(diag) ** 2 <= SINGULAR_REL_EPS * lmax:
            return -np.inf
        return 2.0 * np.log(diag).sum()
    w = np.linalg.eigvalsh(M)
    lmax = w[-1]
    if lmax <= 0.0 or w[0] <= SINGULAR_REL_EPS * lmax:
        return -np.inf
    return float(np.log(w).sum())


def sqrt_psd(M):
    """Symmetric PSD square root via full eigendecomposition.

    Eigenvalues in [-1e-10, 0) are clamped to 0; below -1e-6 raises.
    """
    M = check_symmetric(M)
    w, U = np.linalg.eigh(M)
    if w[0] < -1e-6:
        raise NotPSDError(f"matrix is not PSD: min eigenvalue {w[0]}")
    w = np.clip(w, 0.0, None)
    S = (U * np.sqrt(w)) @ U.T
    return 0.5 * (S + S.T)


def hadamard(A, B):
    """Entrywise (Hadamard) product."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def frobenius_norm_sq(M):
    """Sum of squared entries."""
    M = np.asarray(M, dtype=float)
    return float(np.sum(M * M))


def trace(M):
    """Sum of diagonal entries of a square matrix."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return float(np.trace(M))
