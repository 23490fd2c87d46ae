"""
Core package for the weak measurement simulator
Configuration, errors, operators and states
"""

from .config import Config, setup_logging
from .config import (
    WeakMeterError, DimensionMismatchError, NotHermitianError, InvalidOperatorError, InvalidStateError,
    InvalidMeterError, TruncationLeakError, DegeneratePostselectionError,
    ConsistencyError, NumericalDerivativeError, ScenarioConfigError,
)
from .operators import (
    as_operator, identity, PAULI_X, PAULI_Y, PAULI_Z,
    is_hermitian, is_unitary, hermiticity_residual, unitarity_residual,
    tensor_product, commutator, anticommutator,
    spectral_decomposition, exponential_from_spectrum, hermitian_exponential,
    expectation, variance,
)
from .state import QuantumState

__all__ = [
    'Config',
    'setup_logging',
    'WeakMeterError',
    'DimensionMismatchError',
    'NotHermitianError',
    'InvalidOperatorError',
    'InvalidStateError',
    'InvalidMeterError',
    'TruncationLeakError',
    'DegeneratePostselectionError',
    'ConsistencyError',
    'NumericalDerivativeError',
    'ScenarioConfigError',
    'as_operator',
    'identity',
    'PAULI_X',
    'PAULI_Y',
    'PAULI_Z',
    'is_hermitian',
    'is_unitary',
    'hermiticity_residual',
    'unitarity_residual',
    'tensor_product',
    'commutator',
    'anticommutator',
    'spectral_decomposition',
    'exponential_from_spectrum',
    'hermitian_exponential',
    'expectation',
    'variance',
    'QuantumState',
]
