"""Numerical toolkit for L-functions of level-one Hecke eigenforms.

Exact Fourier coefficients, three-way L evaluation (Dirichlet series,
approximate functional equation, incomplete-gamma series), critical-line
zero location and contour zero counts, the mollified Dirichlet-polynomial
apparatus behind zero-density estimates, and numeric validators for the
underlying exponential-sum inequalities.
"""

from .coefficients import (
    SUPPORTED_WEIGHTS,
    CoefficientTable,
    EigenformSpec,
    build_table,
    divisor_counts,
    eigenform_coeffs,
    mu_coeffs,
    normalize,
    tau_series,
)
from .lfunction import EvalResult, LFunction
from .special_functions import (
    PhaseState,
    chi_f,
    gamma,
    log_gamma,
    lower_gamma,
    theta_f,
    upper_gamma,
)

__all__ = [
    "SUPPORTED_WEIGHTS",
    "CoefficientTable",
    "EigenformSpec",
    "EvalResult",
    "LFunction",
    "PhaseState",
    "build_table",
    "chi_f",
    "divisor_counts",
    "eigenform_coeffs",
    "gamma",
    "log_gamma",
    "lower_gamma",
    "mu_coeffs",
    "normalize",
    "tau_series",
    "theta_f",
    "upper_gamma",
]

__version__ = "0.1.0"
