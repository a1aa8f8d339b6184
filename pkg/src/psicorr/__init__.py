"""Dependent-variable-free multiple correlation.

Point estimation (with bias correction), asymptotic and resampling
confidence intervals, independence testing, and an adaptive Monte Carlo
p-value evaluator for small tail probabilities.
"""

__version__ = "0.1.0"

from .asymptotics import (
    ConfidenceInterval,
    PsiEstimate,
    TestResult,
    asymptotic_ci,
    bias_corrected_psi,
    delta_nu,
    estimate_eta,
    estimate_kappa,
    estimate_tau,
    full_estimate,
    sigma_nu,
    z_statistic,
    z_test_pvalue,
)
from .coefficient import classical_rho, psi_from_correlation, psi_hat, psi_star, rho_aggregate
from .datagen import (
    ComponentDistribution,
    CovarianceCase,
    SigmaSpec,
    build_sigma,
    replication_rng,
    sample_icm,
    solve_phi_for_psi,
)
from .linalg import (
    correlation_from_cov,
    frobenius_norm_sq,
    hadamard,
    log_det_psd,
    sample_mean_cov,
    sqrt_psd,
    trace,
)
from .resampling import ResamplePlan, bootstrap_ci, null_resample_pvalue
from .samc import RegionPartition, SamcConfig, SamcResult, build_regions, propose_update, samc_pvalue

__all__ = [
    "ConfidenceInterval",
    "PsiEstimate",
    "TestResult",
    "asymptotic_ci",
    "bias_corrected_psi",
    "delta_nu",
    "estimate_eta",
    "estimate_kappa",
    "estimate_tau",
    "full_estimate",
    "sigma_nu",
    "z_statistic",
    "z_test_pvalue",
    "classical_rho",
    "psi_from_correlation",
    "psi_hat",
    "psi_star",
    "rho_aggregate",
    "ComponentDistribution",
    "CovarianceCase",
    "SigmaSpec",
    "build_sigma",
    "replication_rng",
    "sample_icm",
    "solve_phi_for_psi",
    "correlation_from_cov",
    "frobenius_norm_sq",
    "hadamard",
    "log_det_psd",
    "sample_mean_cov",
    "sqrt_psd",
    "trace",
    "ResamplePlan",
    "bootstrap_ci",
    "null_resample_pvalue",
    "RegionPartition",
    "SamcConfig",
    "SamcResult",
    "build_regions",
    "propose_update",
    "samc_pvalue",
]
