"""Filtered VP approximation and truncated Lagrange interpolation at Laguerre zeros."""

from .analysis import (
    ErrorReport,
    GibbsComparison,
    LebesgueCurve,
    error_curves,
    gibbs_metrics,
    lebesgue_constant,
    lebesgue_curve,
    test_function,
)
from .approximants import (
    LagrangeApproximant,
    RepresentabilityError,
    VPApproximant,
    VPFilter,
    build_lagrange,
    build_pair,
    build_vp_approximant,
    discrete_cesaro,
    discrete_fourier_coefficients,
    eval_lagrange,
    eval_vp,
    eval_vp_kernel,
    vp_filter,
    vp_fundamental,
)
from .basis import WeightPair, eval_weighted_basis, eval_weighted_basis_with_derivative
from .estimators import TruncatedLagrangeInterpolation, VPApproximation
from .quadrature import (
    GaussRule,
    TruncationParams,
    build_gauss_rule,
    truncated_quadrature,
    truncation_index,
)
from .validation import ConvergenceError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "ErrorReport",
    "GaussRule",
    "GibbsComparison",
    "LagrangeApproximant",
    "LebesgueCurve",
    "RepresentabilityError",
    "TruncatedLagrangeInterpolation",
    "TruncationParams",
    "VPApproximant",
    "VPApproximation",
    "VPFilter",
    "WeightPair",
    "build_gauss_rule",
    "build_lagrange",
    "build_pair",
    "build_vp_approximant",
    "discrete_cesaro",
    "discrete_fourier_coefficients",
    "error_curves",
    "eval_lagrange",
    "eval_vp",
    "eval_vp_kernel",
    "eval_weighted_basis",
    "eval_weighted_basis_with_derivative",
    "gibbs_metrics",
    "lebesgue_constant",
    "lebesgue_curve",
    "test_function",
    "truncated_quadrature",
    "truncation_index",
    "vp_filter",
    "vp_fundamental",
]
