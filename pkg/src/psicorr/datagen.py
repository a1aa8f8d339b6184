"""Synthetic data from the independent component model x = Sigma^{1/2} y.

Three covariance templates (autoregressive, compound symmetry,
M-dependent), several standardized component distributions, and a
bisection solver that maps a target coefficient value to the template
parameter phi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coefficient import psi_from_correlation
from .exceptions import InvalidParameterError, UnreachableTargetError
from .linalg import sqrt_psd


class CovarianceCase(str, Enum):
    AUTOREGRESSIVE = "ar1"
    COMPOUND_SYMMETRY = "cs"
    M_DEPENDENT = "md"


class ComponentDistribution(str, Enum):
    STANDARD_NORMAL = "normal"
    BETA66 = "beta66"
    T6 = "t6"
    T4 = "t4"
    HALF_T6_HALF_BETA66 = "t6+beta66"


# analytic standardization constants: (mean, standard deviation)
_BETA66_MEAN = 0.5
_BETA66_SD = math.sqrt(1.0 / 52.0)
_T6_SD = math.sqrt(6.0 / 4.0)
_T4_SD = math.sqrt(2.0)


@dataclass(frozen=True)
class SigmaSpec:
    """Covariance template: case, parameter phi, dimension p.

    All three templates have unit diagonal, so Sigma is its own
    correlation matrix.
    """

    case: CovarianceCase
    phi: float
    p: int

    def __post_init__(self):
        object.__setattr__(self, "case", CovarianceCase(self.case))
        if self.p < 2:
            raise InvalidParameterError(f"need p >= 2, got {self.p}")
        lo, hi = _phi_range(self.case, self.p)
        if not lo <= self.phi <= hi:
            raise InvalidParameterError(
                f"phi={self.phi} outside PSD range [{lo}, {hi}] for "
                f"{self.case.value} with p={self.p}"
            )


def _phi_range(case, p):
    case = CovarianceCase(case)
    if case is CovarianceCase.AUTOREGRESSIVE:
        return -1.0, 1.0
    if case is CovarianceCase.COMPOUND_SYMMETRY:
        # open interval (-1/(p-1), 1); nudge inward for the closed check
        return -1.0 / (p - 1) + 1e-12, 1.0 - 1e-12
    # tridiagonal: eigenvalues 1 + 2 phi cos(k pi/(p+1)) stay >= 0 iff |phi| <= 0.5
    return -0.5, 0.5


def build_sigma(spec):
    """Materialize the covariance template as a dense matrix."""
    spec = spec if isinstance(spec, SigmaSpec) else SigmaSpec(**spec)
    p, phi = spec.p, spec.phi
    if spec.case is CovarianceCase.AUTOREGRESSIVE:
        idx = np.arange(p)
        sigma = phi ** np.abs(idx[:, None] - idx[None, :])
    elif spec.case is CovarianceCase.COMPOUND_SYMMETRY:
        sigma = np.full((p, p), phi)
        np.fill_diagonal(sigma, 1.0)
    else:
        sigma = np.eye(p)
        off = np.arange(p - 1)
        sigma[off, off + 1] = phi
        sigma[off + 1, off] = phi
    if np.linalg.eigvalsh(sigma)[0] < -1e-10:
        raise InvalidParameterError(
            f"{spec.case.value} with phi={phi}, p={p} is not PSD"
        )
    return sigma


def psi_of_phi(case, p, phi):
    """Coefficient value implied by a template parameter."""
    return psi_from_correlation(build_sigma(SigmaSpec(case=case, phi=phi, p=p)))


def solve_phi_for_psi(case, p, target_psi, tol=1e-10):
    """Find phi >= 0 with psi(Sigma(case, p, phi)) == target_psi by bisection.

    phi -> psi is strictly increasing on the nonnegative part of each
    template's PSD range, so bisection is exact up to ``tol``.
    """
    case = CovarianceCase(case)
    if not 0.0 < target_psi < 1.0:
        raise InvalidParameterError(f"target psi must be in (0,1), got {target_psi}")
    _, hi = _phi_range(case, p)
    hi = min(hi, 1.0 - 1e-9)
    psi_hi = psi_of_phi(case, p, hi)
    if psi_hi < target_psi - tol:
        raise UnreachableTargetError(target_psi, psi_hi)
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if psi_of_phi(case, p, mid) < target_psi:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    phi = 0.5 * (lo + hi)
    if abs(psi_of_phi(case, p, phi) - target_psi) > max(tol, 1e-9):
        raise UnreachableTargetError(target_psi, psi_hi)
    return phi


def replication_rng(base_seed, replication_index=None):
    """Independent, schedule-free random stream for one replication."""
    if replication_index is None:
        return np.random.default_rng(np.random.SeedSequence(base_seed))
    ss = np.random.SeedSequence(base_seed, spawn_key=(replication_index,))
    return np.random.default_rng(ss)


def draw_components(dist, n, p, rng):
    """n x p matrix of independent components, standardized analytically
    to mean 0 and variance 1."""
    dist = ComponentDistribution(dist)
    if dist is ComponentDistribution.STANDARD_NORMAL:
        return rng.standard_normal((n, p))
    if dist is ComponentDistribution.BETA66:
        return (rng.beta(6.0, 6.0, size=(n, p)) - _BETA66_MEAN) / _BETA66_SD
    if dist is ComponentDistribution.T6:
        return rng.standard_t(6, size=(n, p)) / _T6_SD
    if dist is ComponentDistribution.T4:
        return rng.standard_t(4, size=(n, p)) / _T4_SD
    # first ceil(p/2) columns are t(6), the rest beta(6,6)
    k = (p + 1) // 2
    Y = np.empty((n, p))
    Y[:, :k] = rng.standard_t(6, size=(n, k)) / _T6_SD
    Y[:, k:] = (rng.beta(6.0, 6.0, size=(n, p - k)) - _BETA66_MEAN) / _BETA66_SD
    return Y


def sample_icm(n, spec, dist, seed=None, rng=None, sigma_sqrt=None):
    """Draw n rows x_i = Sigma^{1/2} y_i with independent standardized
    components y_ij.

    ``sigma_sqrt`` may be passed to reuse a precomputed square root across
    replications. ``rng`` takes precedence over ``seed``.
    """
    spec = spec if isinstance(spec, SigmaSpec) else SigmaSpec(**spec)
    if n < 2:
        raise InvalidParameterError(f"need n >= 2, got {n}")
    dist = ComponentDistribution(dist)
    if dist is ComponentDistribution.T4:
        warnings.warn(
            "t(4) components have no finite fourth moment; asymptotic "
            "inference on this data is unreliable",
            stacklevel=2,
        )
    if rng is None:
        rng = replication_rng(seed)
    if sigma_sqrt is None:
        sigma_sqrt = sqrt_psd(build_sigma(spec))
    Y = draw_components(dist, n, spec.p, rng)
    return Y @ sigma_sqrt  # sigma_sqrt is symmetric, so rows are S y_i
