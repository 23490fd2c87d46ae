"""
Meter models: readout, generator, initial meter state and the inversion
symmetry, together with the derived response and saturation operators.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, asdict
from functools import cached_property
from typing import Optional, List, Dict, Any

import numpy as np

import config as settings
from core import (
    QuantumState, InvalidMeterError, as_operator, PAULI_X, PAULI_Y, PAULI_Z,
    hermiticity_residual, unitarity_residual, commutator, anticommutator, expectation,
)
from .fock import quadrature_operators, parity_operator, truncated_dimension, fock_state, check_truncation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MeterModel:
    """Readout M, generator B, meter state and optional inversion unitary.

    Derived quantities (response, saturation, K_MB and the meter moments
    used by the formulas) are computed on first access and cached.
    """
    readout: np.ndarray = field(repr=False)
    generator: np.ndarray = field(repr=False)
    state: QuantumState = field(repr=False)
    inversion: Optional[np.ndarray] = field(default=None, repr=False)
    hbar: float = 1.0
    label: str = "custom"
    cutoff: Optional[int] = None

    def __post_init__(self):
        if not self.hbar > 0:
            raise InvalidMeterError(f"hbar must be positive, got {self.hbar}")
        readout = as_operator(self.readout, "readout")
        generator = as_operator(self.generator, "generator")
        for name, op in (("readout", readout), ("generator", generator)):
            residual = hermiticity_residual(op)
            if residual > settings.HERMITIAN_TOL:
                raise InvalidMeterError(f"meter {name} is not Hermitian (residual {residual:.3e})", residual)
        if generator.shape != readout.shape:
            raise InvalidMeterError(f"generator shape {generator.shape} differs from readout shape {readout.shape}")
        if self.state.dim != readout.shape[0]:
            raise InvalidMeterError(f"meter state dimension {self.state.dim} differs from meter dimension {readout.shape[0]}")
        object.__setattr__(self, "readout", readout)
        object.__setattr__(self, "generator", generator)
        if self.inversion is not None:
            inversion = as_operator(self.inversion, "inversion")
            if inversion.shape != readout.shape:
                raise InvalidMeterError(f"inversion shape {inversion.shape} differs from meter shape {readout.shape}")
            residual = unitarity_residual(inversion)
            if residual > settings.UNITARY_TOL:
                raise InvalidMeterError(f"inversion is not unitary (residual {residual:.3e})", residual)
            object.__setattr__(self, "inversion", inversion)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeterModel):
            return NotImplemented
        if (self.inversion is None) != (other.inversion is None):
            return False
        return (
            self.hbar == other.hbar
            and self.state.kind == other.state.kind
            and np.array_equal(self.state.data, other.state.data)
            and np.array_equal(self.readout, other.readout)
            and np.array_equal(self.generator, other.generator)
            and (self.inversion is None or np.array_equal(self.inversion, other.inversion))
        )

    __hash__ = None

    @property
    def dim(self) -> int:
        return self.readout.shape[0]

    def mean(self, o: np.ndarray) -> complex:
        return expectation(self.state, o)

    @cached_property
    def response(self) -> np.ndarray:
        """Gamma_M = (i/hbar)[B, M]"""
        return (1j / self.hbar) * commutator(self.generator, self.readout)

    @cached_property
    def saturation(self) -> np.ndarray:
        """Theta_M = -(i/hbar)[B, Gamma_M]"""
        return (-1j / self.hbar) * commutator(self.generator, self.response)

    @cached_property
    def readout_squared(self) -> np.ndarray:
        return self.readout @ self.readout

    @cached_property
    def generator_squared(self) -> np.ndarray:
        return self.generator @ self.generator

    @cached_property
    def kmb(self) -> float:
        b2, m2 = self.generator_squared, self.readout_squared
        value = 0.5 * self.mean(b2 @ m2 + m2 @ b2) - self.mean(b2) * self.mean(m2)
        return float(value.real)

    @cached_property
    def response_mean(self) -> float:
        return self.mean(self.response).real

    @cached_property
    def response_variance(self) -> float:
        return max(self.mean(self.response @ self.response).real - self.response_mean ** 2, 0.0)

    @cached_property
    def saturation_correlation(self) -> float:
        """<M Theta + Theta M>"""
        return self.mean(anticommutator(self.readout, self.saturation)).real

    @cached_property
    def mb_correlation(self) -> float:
        """<B M + M B>; zero for an unbiased meter"""
        return self.mean(anticommutator(self.generator, self.readout)).real

    @cached_property
    def squared_commutator_moment(self) -> float:
        """Im<B^2 M^2>; the conditional second-order formula assumes it vanishes"""
        return self.mean(self.generator_squared @ self.readout_squared).imag


@dataclass(frozen=True)
class SymmetryReport:
    """Residuals of the inversion-symmetry and unbiasedness conditions.

    Flags are None when no inversion unitary is available to test them.
    """
    spectrum_symmetric: Optional[bool]
    state_parity_ok: Optional[bool]
    generator_odd_ok: Optional[bool]
    unbiased_mb_ok: bool
    spectrum_residual: Optional[float]
    state_parity_residual: Optional[float]
    generator_odd_residual: Optional[float]
    unbiased_mb_residual: float

    @property
    def symmetric(self) -> bool:
        return bool(self.spectrum_symmetric and self.state_parity_ok and self.generator_odd_ok)

    @property
    def all_ok(self) -> bool:
        return self.symmetric and self.unbiased_mb_ok

    def advisories(self) -> List[str]:
        notes = []
        if self.spectrum_symmetric is None:
            notes.append("no inversion unitary: symmetry conditions not tested")
        else:
            if not self.spectrum_symmetric:
                notes.append(f"readout spectrum is not inversion symmetric (residual {self.spectrum_residual:.3e})")
            if not self.state_parity_ok:
                notes.append(f"meter state is not inversion invariant (residual {self.state_parity_residual:.3e})")
            if not self.generator_odd_ok:
                notes.append(f"generator is not odd under inversion (residual {self.generator_odd_residual:.3e})")
        if not self.unbiased_mb_ok:
            notes.append(f"<BM+MB> does not vanish (residual {self.unbiased_mb_residual:.3e})")
        return notes

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["advisories"] = self.advisories()
        return data


def _operator_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, ord=2))


def validate_meter_symmetry(meter: MeterModel) -> SymmetryReport:
    """Check U_inv|m> = |-m>, U_inv|phi> = |phi>, U_inv^dag B U_inv = -B and <BM+MB> = 0"""
    tol = settings.SYMMETRY_TOL
    mb_residual = abs(meter.mb_correlation)
    if meter.inversion is None:
        return SymmetryReport(None, None, None, mb_residual < tol, None, None, None, mb_residual)

    u = meter.inversion
    u_dag = u.conj().T
    spectrum_residual = _operator_norm(u_dag @ meter.readout @ u + meter.readout)
    generator_residual = _operator_norm(u_dag @ meter.generator @ u + meter.generator)
    if meter.state.is_pure:
        state_residual = float(np.linalg.norm(u @ meter.state.data - meter.state.data))
    else:
        rho = meter.state.data
        state_residual = _operator_norm(u @ rho @ u_dag - rho)

    report = SymmetryReport(
        spectrum_symmetric=spectrum_residual < tol,
        state_parity_ok=state_residual < tol,
        generator_odd_ok=generator_residual < tol,
        unbiased_mb_ok=mb_residual < tol,
        spectrum_residual=spectrum_residual,
        state_parity_residual=state_residual,
        generator_odd_residual=generator_residual,
        unbiased_mb_residual=mb_residual,
    )
    for note in report.advisories():
        logger.warning(f"Meter '{meter.label}': {note}")
    return report


def meter_response(meter: MeterModel) -> np.ndarray:
    return meter.response


def meter_saturation(meter: MeterModel) -> np.ndarray:
    return meter.saturation


def meter_correlation_kmb(meter: MeterModel) -> float:
    return meter.kmb


def build_custom_meter(readout, generator, state: QuantumState, inversion=None,
                       hbar: float = 1.0, label: str = "custom", cutoff: Optional[int] = None) -> MeterModel:
    """Store a caller-supplied meter verbatim after invariant checks"""
    meter = MeterModel(readout, generator, state, inversion, hbar, label, cutoff)
    logger.info(f"Built meter '{label}' with dimension {meter.dim}")
    return meter


def build_qubit_meter(hbar: float = 1.0) -> MeterModel:
    """Qubit meter: M = sigma_x, B = (hbar/2) sigma_y, state |0>, inversion sigma_z"""
    return build_custom_meter(
        PAULI_X, 0.5 * hbar * PAULI_Y, QuantumState.basis(2, 0), PAULI_Z, hbar=hbar, label="qubit"
    )


def build_fock_superposition_meter(amplitudes, sigma_x: float, cutoff: int, hbar: float = 1.0,
                                   label: str = "fock") -> MeterModel:
    """x/p meter prepared in an arbitrary Fock-basis superposition"""
    state = fock_state(amplitudes, cutoff)
    check_truncation(state, cutoff)
    x, p = quadrature_operators(sigma_x, cutoff, hbar)
    return build_custom_meter(x, p, state, parity_operator(truncated_dimension(cutoff)),
                              hbar=hbar, label=label, cutoff=cutoff)


def build_gaussian_cv_meter(sigma_x: float, cutoff: int, hbar: float = 1.0) -> MeterModel:
    """x/p meter in the ground state of the reference oscillator (variance sigma_x^2)"""
    return build_fock_superposition_meter([1.0], sigma_x, cutoff, hbar, label="gaussian_cv")
