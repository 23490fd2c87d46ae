"""
Meter models package for the weak measurement simulator
"""

from .service import (
    MeterModel, SymmetryReport,
    build_qubit_meter, build_gaussian_cv_meter, build_fock_superposition_meter, build_custom_meter,
    meter_response, meter_saturation, meter_correlation_kmb, validate_meter_symmetry,
)
from .fock import quadrature_operators, parity_operator, truncated_dimension, fock_state, tail_probability

__all__ = [
    'MeterModel',
    'SymmetryReport',
    'build_qubit_meter',
    'build_gaussian_cv_meter',
    'build_fock_superposition_meter',
    'build_custom_meter',
    'meter_response',
    'meter_saturation',
    'meter_correlation_kmb',
    'validate_meter_symmetry',
    'quadrature_operators',
    'parity_operator',
    'truncated_dimension',
    'fock_state',
    'tail_probability',
]
