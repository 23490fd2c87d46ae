"""
Truncated Fock-space operators for continuous-variable meters.

Quadratures follow x = sigma_x (a + a^dagger), p = (hbar / (2 sigma_x)) i (a^dagger - a),
so the vacuum of the reference oscillator has a position variance of exactly
sigma_x^2 and [x, p] = i hbar everywhere except the top Fock level.
"""
from typing import Tuple

import numpy as np

import config as settings
from core import as_operator, QuantumState, TruncationLeakError


def truncated_dimension(cutoff: int) -> int:
    """Working dimension for a given cutoff (padding keeps edge effects above it)"""
    if cutoff < 2:
        raise ValueError(f"cutoff must be at least 2, got {cutoff}")
    return cutoff + settings.TRUNCATION_PADDING


def annihilator(dim: int) -> np.ndarray:
    return as_operator(np.diag(np.sqrt(np.arange(1, dim)), 1), "annihilator")


def creator(dim: int) -> np.ndarray:
    return as_operator(np.diag(np.sqrt(np.arange(1, dim)), -1), "creator")


def quadrature_operators(sigma_x: float, cutoff: int, hbar: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Position and momentum quadratures of the reference oscillator"""
    if sigma_x <= 0:
        raise ValueError(f"sigma_x must be positive, got {sigma_x}")
    dim = truncated_dimension(cutoff)
    a, a_dag = annihilator(dim), creator(dim)
    x = sigma_x * (a + a_dag)
    p = (hbar / (2.0 * sigma_x)) * 1j * (a_dag - a)
    return as_operator(x, "x"), as_operator(p, "p")


def parity_operator(dim: int) -> np.ndarray:
    """Fock parity diag((-1)^n)"""
    return as_operator(np.diag((-1.0) ** np.arange(dim)), "parity")


def tail_probability(state: QuantumState, cutoff: int) -> float:
    """Occupation of Fock levels strictly above the cutoff"""
    if state.is_pure:
        return float(np.sum(np.abs(state.data[cutoff + 1:]) ** 2))
    return float(np.trace(state.data).real - np.trace(state.data[:cutoff + 1, :cutoff + 1]).real)


def check_truncation(state: QuantumState, cutoff: int):
    tail = tail_probability(state, cutoff)
    if tail > settings.TRUNCATION_TAIL_TOL:
        raise TruncationLeakError(
            f"meter state has probability {tail:.3e} above Fock level {cutoff}; raise the cutoff", tail
        )


def fock_state(amplitudes, cutoff: int) -> QuantumState:
    """Pad Fock amplitudes with zeros to the working dimension of the cutoff"""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    dim = truncated_dimension(cutoff)
    if amplitudes.size > dim:
        raise TruncationLeakError(
            f"{amplitudes.size} Fock amplitudes exceed the working dimension {dim}",
            float(np.sum(np.abs(amplitudes[dim:]) ** 2)),
        )
    padded = np.zeros(dim, dtype=np.complex128)
    padded[:amplitudes.size] = amplitudes
    return QuantumState.pure(padded)
