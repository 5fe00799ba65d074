"""Smoothest averaging kernels for discrete derivatives.

For a symmetric kernel ``u`` the operator ``f -> grad^k (u * f)`` on
``l2(Z)`` has norm ``max_t (2 - 2 cos t)^(k/2) |u_hat(t)|``.  This package
computes the kernels that minimise that norm for the orders where the
minimiser is known in closed form (Chebyshev and Zolotarev polynomials), the
constants themselves, and independent numerical checks of both.
"""

from ._accel import backend
from .errors import SkernError, UnsupportedCaseError
from .kernels import (
    Kernel,
    ProblemSpec,
    Restriction,
    convolve,
    indicator_power,
    optimal_kernel,
    sharp_constant,
    smooth,
    symbol,
)

__version__ = "0.1.0"

__all__ = [
    "Kernel",
    "ProblemSpec",
    "Restriction",
    "SkernError",
    "UnsupportedCaseError",
    "backend",
    "convolve",
    "indicator_power",
    "optimal_kernel",
    "sharp_constant",
    "smooth",
    "symbol",
    "__version__",
]
