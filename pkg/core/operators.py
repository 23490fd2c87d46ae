"""
Dense complex linear algebra shared by meters, dynamics and formulas.

Operators are plain ``numpy`` complex128 arrays. ``as_operator`` returns a
read-only copy so that operators stored on models and scenarios cannot be
mutated after construction.
"""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Tuple

import numpy as np

import config as settings
from .config import DimensionMismatchError, NotHermitianError, InvalidOperatorError

if TYPE_CHECKING:
    from .state import QuantumState

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


def as_operator(data, name: str = "operator") -> ComplexMatrix:
    """Validate a square, finite matrix and return a frozen complex copy"""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidOperatorError(f"{name} has non-finite entries")
    m.setflags(write=False)
    return m


def identity(dim: int) -> ComplexMatrix:
    return as_operator(np.eye(dim), "identity")


PAULI_X = as_operator([[0, 1], [1, 0]], "pauli_x")
PAULI_Y = as_operator([[0, -1j], [1j, 0]], "pauli_y")
PAULI_Z = as_operator([[1, 0], [0, -1]], "pauli_z")


def hermiticity_residual(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def unitarity_residual(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_hermitian(m: ComplexMatrix, tol: float = settings.HERMITIAN_TOL) -> bool:
    return hermiticity_residual(m) <= tol


def is_unitary(m: ComplexMatrix, tol: float = settings.UNITARY_TOL) -> bool:
    return unitarity_residual(m) <= tol


def _require_same_shape(a: ComplexMatrix, b: ComplexMatrix):
    if a.shape != b.shape:
        raise DimensionMismatchError(f"operator shapes differ: {a.shape} vs {b.shape}")


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product with the system index major and the meter index minor"""
    return np.kron(a, b)


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _require_same_shape(a, b)
    return a @ b - b @ a


def anticommutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _require_same_shape(a, b)
    return a @ b + b @ a


def spectral_decomposition(h: ComplexMatrix, tol: float = settings.HERMITIAN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvector columns of a Hermitian matrix"""
    residual = hermiticity_residual(h)
    if residual > tol:
        raise NotHermitianError(f"generator is not Hermitian (residual {residual:.3e})", residual)
    return np.linalg.eigh(h)


def exponential_from_spectrum(eigenvalues: np.ndarray, eigenvectors: np.ndarray, theta: float) -> ComplexMatrix:
    """exp(-i theta h) for h = V diag(eigenvalues) V^dagger"""
    phases = np.exp(-1j * theta * eigenvalues)
    return (eigenvectors * phases) @ eigenvectors.conj().T


def hermitian_exponential(h: ComplexMatrix, theta: float) -> ComplexMatrix:
    """Return exp(-i*theta*h) computed from the eigendecomposition of h"""
    eigenvalues, eigenvectors = spectral_decomposition(h)
    return exponential_from_spectrum(eigenvalues, eigenvectors, theta)


def expectation(state: "QuantumState", o: ComplexMatrix) -> complex:
    """<psi|o|psi> for pure states, tr(rho o) for mixed states"""
    if o.shape != (state.dim, state.dim):
        raise DimensionMismatchError(f"observable shape {o.shape} does not match state dimension {state.dim}")
    if state.kind == "pure":
        psi = state.data
        return complex(np.vdot(psi, o @ psi))
    return complex(np.trace(state.data @ o))


def variance(state: "QuantumState", o: ComplexMatrix) -> float:
    """<o^2> - <o>^2 for a Hermitian observable (may dip to -1e-10 from rounding)"""
    residual = hermiticity_residual(o)
    if residual > settings.HERMITIAN_TOL:
        raise NotHermitianError(f"variance needs a Hermitian observable (residual {residual:.3e})", residual)
    mean = expectation(state, o).real
    if state.kind == "pure":
        # |o psi|^2 avoids forming o @ o
        second = float(np.vdot(o @ state.data, o @ state.data).real)
    else:
        second = expectation(state, o @ o).real
    return second - mean * mean
