"""Discrete exponential-dispersion count distributions from variance functions.

Construct the ABM, LMS, and LMNS count families from their variance
functions, evaluate their pmfs, fit them to frequency tables by maximum
likelihood, and score the fits.
"""

from .distributions import (
    Baseline,
    BaselineSpec,
    ModelSpec,
    PmfTable,
    baseline_pmf,
    numeric_moments,
    pmf_table,
    pmf_values,
    psi_functions,
    variance_function,
)
from .errors import (
    DatasetFormatError,
    DomainError,
    EdmError,
    InsufficientCellsError,
    NonConvergenceError,
    OracleCapError,
    PrecisionError,
    SingularParametersError,
    TailCapError,
)
from .gof import GofReport, PoolingRule, chi2_sf, chi_square, pool_cells, rmse, score
from .inference import (
    CountDataset,
    EmpiricalStats,
    FitConfig,
    FitResult,
    empirical_stats,
    fit_baseline,
    fit_mle,
    loglikelihood,
    select_model,
)
from .partitions import enumerate_partitions
from .series import (
    ClassId,
    CoefficientSet,
    HDerivScaled,
    KernelTable,
    QVector,
    VarianceParams,
    coefficients,
    h_coefficient,
    h_deriv_scaled,
    kernel_mu_oracle,
    kernel_table,
    q_vector,
)

__version__ = "0.1.0"

__all__ = [
    "Baseline",
    "BaselineSpec",
    "ClassId",
    "CoefficientSet",
    "CountDataset",
    "DatasetFormatError",
    "DomainError",
    "EdmError",
    "EmpiricalStats",
    "FitConfig",
    "FitResult",
    "GofReport",
    "HDerivScaled",
    "InsufficientCellsError",
    "KernelTable",
    "ModelSpec",
    "NonConvergenceError",
    "OracleCapError",
    "PmfTable",
    "PoolingRule",
    "PrecisionError",
    "QVector",
    "SingularParametersError",
    "TailCapError",
    "VarianceParams",
    "baseline_pmf",
    "chi2_sf",
    "chi_square",
    "coefficients",
    "empirical_stats",
    "enumerate_partitions",
    "fit_baseline",
    "fit_mle",
    "h_coefficient",
    "h_deriv_scaled",
    "kernel_mu_oracle",
    "kernel_table",
    "loglikelihood",
    "numeric_moments",
    "pmf_table",
    "pmf_values",
    "pool_cells",
    "psi_functions",
    "q_vector",
    "rmse",
    "score",
    "select_model",
    "variance_function",
]
