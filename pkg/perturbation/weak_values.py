"""
Weak values and the conditional statistics of a post-selected observable.

All quantities are normalized by the post-selection probability <f|rho|f>:

    A_w        = <f|A rho|f> / <f|rho|f>
    wv(A^2)    = <f|A^2 rho|f> / <f|rho|f>
    sandwich   = <f|A rho A|f> / <f|rho|f>
    ozawa      = sandwich - (Re A_w)^2
    curvature  = (d^2/dphi_A^2) <f|rho|f> / <f|rho|f>
    V_dyn      = -(hbar^2 / 2) curvature
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, asdict
from typing import Optional, Tuple, Dict, Any

import numpy as np

import config as settings
from core import (
    QuantumState, ConsistencyError, DegeneratePostselectionError, DimensionMismatchError,
    InvalidStateError, commutator,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Overlaps:
    probability: float
    weak_numerator: complex        # <f|A rho|f>
    square_numerator: complex      # <f|A^2 rho|f>
    sandwich_numerator: float      # <f|A rho A|f>


def _scale(value: float) -> float:
    return max(1.0, abs(value))


def _overlaps(rho: QuantumState, a: np.ndarray, f) -> _Overlaps:
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    if f.size != rho.dim or a.shape != (rho.dim, rho.dim):
        raise DimensionMismatchError(
            f"post-selection ({f.size}), observable {a.shape} and state ({rho.dim}) dimensions disagree"
        )
    density = rho.density_matrix()
    probability = float(np.vdot(f, density @ f).real)
    if probability < settings.DEGENERATE_POSTSELECTION:
        raise DegeneratePostselectionError(probability)
    weak_numerator = complex(np.vdot(f, a @ density @ f))
    square_numerator = complex(np.vdot(f, a @ a @ density @ f))
    sandwich_numerator = float(np.vdot(f, a @ density @ a @ f).real)

    if rho.is_pure:
        # pure-state collapse |<f|A|psi>|^2 / |<f|psi>|^2 as a standing cross-check
        pure_numerator = abs(np.vdot(f, a @ rho.data)) ** 2
        if abs(pure_numerator - sandwich_numerator) > settings.SANDWICH_ROUTE_TOL * _scale(pure_numerator):
            raise ConsistencyError(
                f"pure and density-matrix sandwiches disagree: {pure_numerator!r} vs {sandwich_numerator!r}"
            )
    return _Overlaps(probability, weak_numerator, square_numerator, sandwich_numerator)


def weak_value(rho: QuantumState, a: np.ndarray, f) -> complex:
    o = _overlaps(rho, a, f)
    return o.weak_numerator / o.probability


def weak_value_of_square(rho: QuantumState, a: np.ndarray, f) -> complex:
    o = _overlaps(rho, a, f)
    return o.square_numerator / o.probability


def sandwiched_second_moment(rho: QuantumState, a: np.ndarray, f) -> float:
    o = _overlaps(rho, a, f)
    return o.sandwich_numerator / o.probability


def ozawa_uncertainty(rho: QuantumState, a: np.ndarray, f) -> float:
    """Ozawa error epsilon^2_A(f) = sandwich - (Re A_w)^2, clamped at zero"""
    o = _overlaps(rho, a, f)
    value = o.sandwich_numerator / o.probability - (o.weak_numerator / o.probability).real ** 2
    return max(value, 0.0)


def curvature_routes(rho: QuantumState, a: np.ndarray, f, hbar: float = 1.0) -> Tuple[float, float]:
    """(double-commutator route, weak-value route) for p_f''(0) / p_f(0)"""
    o = _overlaps(rho, a, f)
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    projector = np.outer(f, f.conj())
    double = commutator(a, commutator(a, projector))
    via_commutator = float(-np.trace(rho.density_matrix() @ double).real / hbar ** 2) / o.probability
    via_weak_values = -(2.0 / hbar ** 2) * (
        (o.square_numerator / o.probability).real - o.sandwich_numerator / o.probability
    )
    return via_commutator, via_weak_values


def postselection_curvature(rho: QuantumState, a: np.ndarray, f, hbar: float = 1.0) -> float:
    via_commutator, via_weak_values = curvature_routes(rho, a, f, hbar)
    if abs(via_commutator - via_weak_values) > settings.CURVATURE_ROUTE_TOL * _scale(via_commutator):
        raise ConsistencyError(
            f"curvature routes disagree: commutator {via_commutator!r} vs weak values {via_weak_values!r}"
        )
    return via_commutator


def dynamic_pseudovariance(rho: QuantumState, a: np.ndarray, f, hbar: float = 1.0) -> float:
    """V_dyn = -(hbar^2/2) curvature; for pure states equal to Re wv(A^2) - |A_w|^2"""
    v_dyn = -0.5 * hbar ** 2 * postselection_curvature(rho, a, f, hbar)
    if rho.is_pure:
        o = _overlaps(rho, a, f)
        pure_form = (o.square_numerator / o.probability).real - abs(o.weak_numerator / o.probability) ** 2
        if abs(v_dyn - pure_form) > settings.PSEUDOVARIANCE_ROUTE_TOL * _scale(pure_form):
            raise ConsistencyError(f"V_dyn {v_dyn!r} differs from the pure-state form {pure_form!r}")
    return v_dyn


def weak_variance(psi: QuantumState, a: np.ndarray, f) -> float:
    """Re(wv(A^2) - A_w^2); only meaningful for pure initial states"""
    if not psi.is_pure:
        raise InvalidStateError("the weak variance is defined for pure system states only")
    o = _overlaps(psi, a, f)
    a_w = o.weak_numerator / o.probability
    return (o.square_numerator / o.probability - a_w ** 2).real


def gaussian_conditional_growth(rho: QuantumState, a: np.ndarray, f, hbar: float = 1.0) -> float:
    """Re wv(A^2) + sandwich - 2 (Re A_w)^2: conditional variance growth for an x/p Gaussian meter"""
    o = _overlaps(rho, a, f)
    a_w = o.weak_numerator / o.probability
    return (o.square_numerator / o.probability).real + o.sandwich_numerator / o.probability - 2.0 * a_w.real ** 2


@dataclass(frozen=True)
class WeakStatistics:
    weak_value: complex
    sandwiched_second_moment: float
    weak_value_of_a2: complex
    ozawa: float
    curvature: float
    v_dyn: float
    postselection_probability: float
    weak_variance: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("weak_value", "weak_value_of_a2"):
            z = data.pop(key)
            data[f"{key}_re"] = z.real
            data[f"{key}_im"] = z.imag
        return data


def weak_statistics(rho: QuantumState, a: np.ndarray, f, hbar: float = 1.0) -> WeakStatistics:
    o = _overlaps(rho, a, f)
    curvature = postselection_curvature(rho, a, f, hbar)
    return WeakStatistics(
        weak_value=o.weak_numerator / o.probability,
        sandwiched_second_moment=o.sandwich_numerator / o.probability,
        weak_value_of_a2=o.square_numerator / o.probability,
        ozawa=ozawa_uncertainty(rho, a, f),
        curvature=curvature,
        v_dyn=dynamic_pseudovariance(rho, a, f, hbar),
        postselection_probability=o.probability,
        weak_variance=weak_variance(rho, a, f) if rho.is_pure else None,
    )
