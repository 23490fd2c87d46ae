"""
Perturbative formulas package for the weak measurement simulator
"""

from .weak_values import (
    WeakStatistics, weak_value, weak_value_of_square, sandwiched_second_moment, ozawa_uncertainty,
    curvature_routes, postselection_curvature, dynamic_pseudovariance, weak_variance,
    gaussian_conditional_growth, weak_statistics,
)
from .service import (
    GrowthReport, unconditioned_shift_rate, variance_growth_decomposition, conditional_shift_rate,
    conditional_variance_growth, projector_product_derivative,
)

__all__ = [
    'WeakStatistics',
    'GrowthReport',
    'weak_value',
    'weak_value_of_square',
    'sandwiched_second_moment',
    'ozawa_uncertainty',
    'curvature_routes',
    'postselection_curvature',
    'dynamic_pseudovariance',
    'weak_variance',
    'gaussian_conditional_growth',
    'weak_statistics',
    'unconditioned_shift_rate',
    'variance_growth_decomposition',
    'conditional_shift_rate',
    'conditional_variance_growth',
    'projector_product_derivative',
]
