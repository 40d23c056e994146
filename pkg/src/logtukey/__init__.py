"""Log-Tukey Gaussianization, Wasserstein diagnostics and Gaussian-sampling few-shot learning."""

from .errors import (
    DataError,
    DegenerateInput,
    DomainError,
    GaussianizeError,
    InsufficientData,
    SingularCovariance,
)
from .stats import (
    DensityCurve,
    GaussianRef,
    MomentSummary,
    MultivariateGaussian,
    estimate_classwise_gaussian,
    gaussian_quantile,
    kde_curve,
    moments,
    sample_mvg,
    wasserstein1_to_gaussian,
    wasserstein1_to_matched_gaussian,
)
from .transforms import TransformSpec, apply, apply_all, fit_lambda

__version__ = "0.1.0"
