"""Normalized pure and mixed quantum states."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

import config as settings
from .config import InvalidStateError
from .operators import as_operator, hermiticity_residual


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A state vector (kind='pure') or a density matrix (kind='mixed')"""
    kind: Literal["pure", "mixed"]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind == "pure":
            psi = np.array(self.data, dtype=np.complex128).reshape(-1)
            if psi.size == 0 or not np.all(np.isfinite(psi)):
                raise InvalidStateError("state vector must be non-empty and finite")
            drift = abs(np.linalg.norm(psi) - 1.0)
            if drift > settings.STATE_NORM_TOL:
                raise InvalidStateError(f"state vector is not normalized (norm drift {drift:.3e})")
            psi.setflags(write=False)
            object.__setattr__(self, "data", psi)
        elif self.kind == "mixed":
            rho = as_operator(self.data, "density matrix")
            residual = hermiticity_residual(rho)
            if residual > settings.HERMITIAN_TOL:
                raise InvalidStateError(f"density matrix is not Hermitian (residual {residual:.3e})")
            trace_drift = abs(np.trace(rho).real - 1.0)
            if trace_drift > settings.STATE_NORM_TOL:
                raise InvalidStateError(f"density matrix trace differs from 1 by {trace_drift:.3e}")
            lowest = float(np.linalg.eigvalsh(rho)[0])
            if lowest < settings.EIGENVALUE_FLOOR:
                raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
            object.__setattr__(self, "data", rho)
        else:
            raise InvalidStateError(f"unknown state kind {self.kind!r}")

    @classmethod
    def pure(cls, amplitudes) -> "QuantumState":
        return cls("pure", np.asarray(amplitudes, dtype=np.complex128))

    @classmethod
    def mixed(cls, rho) -> "QuantumState":
        return cls("mixed", np.asarray(rho, dtype=np.complex128))

    @classmethod
    def basis(cls, dim: int, index: int) -> "QuantumState":
        psi = np.zeros(dim, dtype=np.complex128)
        psi[index] = 1.0
        return cls("pure", psi)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def tensor(self, other: "QuantumState") -> "QuantumState":
        """Joint state with self as the major (system) factor"""
        if self.is_pure and other.is_pure:
            return QuantumState("pure", np.kron(self.data, other.data))
        return QuantumState("mixed", np.kron(self.density_matrix(), other.density_matrix()))
