"""
Finite-difference oracle package for the weak measurement simulator
"""

from .service import (
    DerivativeOrder, DerivativeEstimate, central_derivative,
    fd_variance_growth, fd_shift_rate, fd_numerator_rate, fd_postselection_curvature,
)

__all__ = [
    'DerivativeOrder',
    'DerivativeEstimate',
    'central_derivative',
    'fd_variance_growth',
    'fd_shift_rate',
    'fd_numerator_rate',
    'fd_postselection_curvature',
]
