"""
Exact system-meter dynamics under U(s) = exp(-i s A (x) B / hbar).

Evolution uses the factorized eigendecomposition of A (x) B: with
A = V_A diag(a) V_A^dag and B = V_B diag(b) V_B^dag the joint generator is
diagonal in V_A (x) V_B with eigenvalues a (x) b. Pure joint states are evolved
as vectors and mixed ones as density matrices; nothing is Trotterized.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, List, Tuple, Dict

import numpy as np

import config as settings
from core import (
    QuantumState, DegeneratePostselectionError, DimensionMismatchError, InvalidStateError,
    InvalidMeterError, NotHermitianError, as_operator, hermiticity_residual, identity,
    tensor_product, spectral_decomposition, exponential_from_spectrum, hermitian_exponential,
)
from meters import MeterModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Scenario:
    """System observable and state, optional post-selection |f>, and a meter"""
    system_observable: np.ndarray = field(repr=False)
    system_state: QuantumState = field(repr=False)
    meter: MeterModel
    postselection: Optional[np.ndarray] = field(default=None, repr=False)
    hbar: float = 1.0

    def __post_init__(self):
        a = as_operator(self.system_observable, "system observable")
        residual = hermiticity_residual(a)
        if residual > settings.HERMITIAN_TOL:
            raise NotHermitianError(f"system observable is not Hermitian (residual {residual:.3e})", residual)
        if self.system_state.dim != a.shape[0]:
            raise DimensionMismatchError(
                f"system state dimension {self.system_state.dim} differs from observable dimension {a.shape[0]}"
            )
        if abs(self.hbar - self.meter.hbar) > 1e-12 * max(1.0, abs(self.hbar)):
            raise InvalidMeterError(f"meter hbar {self.meter.hbar} differs from scenario hbar {self.hbar}")
        object.__setattr__(self, "system_observable", a)
        if self.postselection is not None:
            f = np.array(self.postselection, dtype=np.complex128).reshape(-1)
            if f.size != a.shape[0]:
                raise DimensionMismatchError(f"post-selection has {f.size} amplitudes, system dimension is {a.shape[0]}")
            drift = abs(np.linalg.norm(f) - 1.0)
            if drift > settings.STATE_NORM_TOL:
                raise InvalidStateError(f"post-selection vector is not normalized (norm drift {drift:.3e})")
            f.setflags(write=False)
            object.__setattr__(self, "postselection", f)

    @property
    def system_dim(self) -> int:
        return self.system_observable.shape[0]

    @property
    def joint_dim(self) -> int:
        return self.system_dim * self.meter.dim

    @property
    def has_postselection(self) -> bool:
        return self.postselection is not None

    def require_postselection(self) -> np.ndarray:
        if self.postselection is None:
            raise ValueError("scenario has no post-selection state")
        return self.postselection

    @cached_property
    def postselector(self) -> np.ndarray:
        f = self.require_postselection()
        return np.outer(f, f.conj())

    @cached_property
    def joint_state(self) -> QuantumState:
        return self.system_state.tensor(self.meter.state)

    @cached_property
    def _generator_spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        a_vals, a_vecs = spectral_decomposition(self.system_observable)
        b_vals, b_vecs = spectral_decomposition(self.meter.generator)
        return np.kron(a_vals, b_vals), np.kron(a_vecs, b_vecs)

    @cached_property
    def _eigenbasis_state(self) -> np.ndarray:
        """Joint initial state expressed in the generator eigenbasis"""
        _, vecs = self._generator_spectrum
        if self.joint_state.is_pure:
            return vecs.conj().T @ self.joint_state.data
        return vecs.conj().T @ self.joint_state.data @ vecs

    @cached_property
    def joint_operators(self) -> Dict[str, np.ndarray]:
        """I (x) M, I (x) M^2 and, with post-selection, P_f (x) I, P_f (x) M, P_f (x) M^2"""
        i_s = identity(self.system_dim)
        ops = {
            "readout": tensor_product(i_s, self.meter.readout),
            "readout_sq": tensor_product(i_s, self.meter.readout_squared),
        }
        if self.has_postselection:
            p = self.postselector
            ops["postselector"] = tensor_product(p, identity(self.meter.dim))
            ops["postselected_readout"] = tensor_product(p, self.meter.readout)
            ops["postselected_readout_sq"] = tensor_product(p, self.meter.readout_squared)
        return ops

    def evolve(self, s: float) -> Tuple[str, np.ndarray]:
        """Joint state after the interaction of strength s as (kind, data)"""
        vals, vecs = self._generator_spectrum
        phases = np.exp(-1j * (s / self.hbar) * vals)
        coeffs = self._eigenbasis_state
        if self.joint_state.is_pure:
            return "pure", vecs @ (phases * coeffs)
        return "mixed", vecs @ (phases[:, None] * coeffs * phases.conj()[None, :]) @ vecs.conj().T


@dataclass(frozen=True)
class MomentSet:
    """Readout mean, second moment and variance; probability only when conditional"""
    mean: float
    second_moment: float
    variance: float
    postselection_probability: Optional[float] = None

    @classmethod
    def from_moments(cls, mean: float, second_moment: float, probability: Optional[float] = None) -> "MomentSet":
        return cls(mean, second_moment, second_moment - mean * mean, probability)


def _expect(kind: str, data: np.ndarray, o: np.ndarray) -> float:
    if kind == "pure":
        return float(np.vdot(data, o @ data).real)
    return float(np.einsum("ij,ji->", data, o).real)


def interaction_unitary(sc: Scenario, s: float) -> np.ndarray:
    vals, vecs = sc._generator_spectrum
    return exponential_from_spectrum(vals, vecs, s / sc.hbar)


def heisenberg_readout(sc: Scenario, s: float) -> np.ndarray:
    """M(s) = U^dag (I (x) M) U"""
    u = interaction_unitary(sc, s)
    return u.conj().T @ sc.joint_operators["readout"] @ u


def readout_moments(sc: Scenario, s: float) -> MomentSet:
    """Unconditioned readout statistics after the interaction (post-selection ignored)"""
    kind, data = sc.evolve(s)
    ops = sc.joint_operators
    return MomentSet.from_moments(_expect(kind, data, ops["readout"]), _expect(kind, data, ops["readout_sq"]))


def conditional_readout_moments(sc: Scenario, s: float) -> MomentSet:
    """Readout statistics conditioned on the system being found in |f>"""
    sc.require_postselection()
    kind, data = sc.evolve(s)
    ops = sc.joint_operators
    probability = _expect(kind, data, ops["postselector"])
    if probability < settings.DEGENERATE_POSTSELECTION:
        raise DegeneratePostselectionError(probability)
    mean = _expect(kind, data, ops["postselected_readout"]) / probability
    second = _expect(kind, data, ops["postselected_readout_sq"]) / probability
    return MomentSet.from_moments(mean, second, probability)


def conditional_numerator(sc: Scenario, s: float) -> float:
    """Unnormalized conditional readout <P_f(s) M(s)>"""
    sc.require_postselection()
    kind, data = sc.evolve(s)
    return _expect(kind, data, sc.joint_operators["postselected_readout"])


@dataclass(frozen=True)
class JointOutcome:
    generator_value: float
    postselected: bool
    probability: float


@dataclass(frozen=True)
class GeneratorJointStatistics:
    """Joint distribution of a B eigenvalue measurement and the f / not-f outcome"""
    s: float
    rows: Tuple[JointOutcome, ...]

    @property
    def generator_values(self) -> np.ndarray:
        return np.array([r.generator_value for r in self.rows if r.postselected])

    def _column(self, postselected: bool) -> np.ndarray:
        return np.array([r.probability for r in self.rows if r.postselected is postselected])

    @property
    def total_probability(self) -> float:
        return float(sum(r.probability for r in self.rows))

    @property
    def postselection_marginal(self) -> float:
        return float(np.sum(self._column(True)))

    def generator_marginal(self) -> np.ndarray:
        return self._column(True) + self._column(False)

    def conditional_postselection(self, min_weight: float = 1e-8) -> Tuple[np.ndarray, np.ndarray]:
        """(B_b, P(f | B_b)) for eigenvalues carrying at least min_weight"""
        weights = self.generator_marginal()
        keep = weights > min_weight
        return self.generator_values[keep], self._column(True)[keep] / weights[keep]


def _merge_eigenvalues(values: np.ndarray, tol: float) -> List[np.ndarray]:
    groups: List[List[int]] = []
    for idx in np.argsort(values):
        if groups and abs(values[idx] - values[groups[-1][0]]) <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return [np.array(g) for g in groups]


def generator_joint_statistics(sc: Scenario, s: float) -> GeneratorJointStatistics:
    """P(B_b, f) and P(B_b, not f) for a B-basis meter measurement after the interaction"""
    f = sc.require_postselection()
    b_vals, b_vecs = spectral_decomposition(sc.meter.generator)
    d_s, d_m = sc.system_dim, sc.meter.dim
    kind, data = sc.evolve(s)
    if kind == "pure":
        psi = data.reshape(d_s, d_m) @ b_vecs.conj()  # meter index in the B eigenbasis
        total = np.sum(np.abs(psi) ** 2, axis=0)
        selected = np.abs(f.conj() @ psi) ** 2
    else:
        rho = data.reshape(d_s, d_m, d_s, d_m)
        rho_b = np.einsum("jk,ijlm,mk->ikl", b_vecs.conj(), rho, b_vecs)  # diagonal in the B eigenbasis
        total = np.einsum("iki->k", rho_b).real
        selected = np.einsum("i,ikl,l->k", f.conj(), rho_b, f).real
    rows: List[JointOutcome] = []
    for group in _merge_eigenvalues(b_vals, settings.EIGENVALUE_MERGE_TOL):
        value = float(np.mean(b_vals[group]))
        p_f = float(np.sum(selected[group]))
        p_total = float(np.sum(total[group]))
        rows.append(JointOutcome(value, True, p_f))
        rows.append(JointOutcome(value, False, max(p_total - p_f, 0.0)))
    return GeneratorJointStatistics(s, tuple(rows))


def estimate_curvature_from_joint_statistics(sc: Scenario, s: float, degree: int = 6,
                                             min_weight: float = 1e-8) -> float:
    """Normalized curvature of p_f(phi_A) from joint statistics at one fixed s.

    U(s) commutes with I (x) Pi_b, so P(f | B_b) = p_f(phi_A = s B_b) exactly and a
    polynomial fit over the observed phi_A values recovers p_f''(0) / p_f(0).
    """
    if s == 0:
        raise ValueError("joint statistics at s = 0 carry no phi_A spread")
    values, conditional = generator_joint_statistics(sc, s).conditional_postselection(min_weight)
    if values.size < 3:
        raise ValueError(f"need at least 3 generator eigenvalues with weight > {min_weight}, got {values.size}")
    degree = min(degree, values.size - 1)
    coeffs = np.polynomial.polynomial.polyfit(s * values, conditional, degree)
    if coeffs[0] < settings.DEGENERATE_POSTSELECTION:
        raise DegeneratePostselectionError(float(coeffs[0]))
    return float(2.0 * coeffs[2] / coeffs[0])


def postselection_probability(sc: Scenario) -> float:
    """<f|rho|f> before the interaction"""
    f = sc.require_postselection()
    rho_f = f.conj() @ sc.system_state.density_matrix() @ f
    return float(rho_f.real)


def phase_shifted_postselection_probability(sc: Scenario, phi_a: float) -> float:
    """<f| U_A(phi_A) rho U_A^dag(phi_A) |f> with U_A = exp(-i phi_A A / hbar)"""
    f = sc.require_postselection()
    u = hermitian_exponential(sc.system_observable, phi_a / sc.hbar)
    if sc.system_state.is_pure:
        return float(abs(np.vdot(f, u @ sc.system_state.data)) ** 2)
    rho = u @ sc.system_state.data @ u.conj().T
    return float(np.vdot(f, rho @ f).real)


def meter_truncation_tail(sc: Scenario, s: float) -> Optional[float]:
    """Evolved meter occupation above the Fock cutoff; None when the meter has no cutoff"""
    cutoff = sc.meter.cutoff
    if cutoff is None:
        return None
    kind, data = sc.evolve(s)
    d_s, d_m = sc.system_dim, sc.meter.dim
    if kind == "pure":
        occupation = np.sum(np.abs(data.reshape(d_s, d_m)) ** 2, axis=0)
    else:
        occupation = np.einsum("ikik->k", data.reshape(d_s, d_m, d_s, d_m)).real
    return float(np.sum(occupation[cutoff + 1:]))
