"""Causal derivative estimation from noisy samples with truncated Jacobi series."""

__version__ = "0.1.0"

from .estimator import (
    EstimateSeries,
    SampledSignal,
    apply_kernel,
    delayed_config,
    estimate_at,
    estimate_series,
)
from .jacobi import (
    JacobiParams,
    PolynomialCoeffs,
    eval_jacobi,
    jacobi_coeffs,
    jacobi_norm_sq,
    log_gamma,
    smallest_root,
)
from .kernel import DiscreteKernel, EstimatorConfig, discretize, kernel_coefficient, kernel_function
from .tuning import (
    BoundReport,
    bound_constants,
    bound_report,
    delayed_bound_constants,
    optimal_window,
    psi,
    rate_exponent,
)
