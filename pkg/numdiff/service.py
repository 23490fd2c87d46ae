"""
Finite-difference oracle for the exact dynamics.

Central stencils with Richardson extrapolation over halved steps. This module
only talks to the exact dynamics so its values stay an independent reference
for the closed-form formulas.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Callable, Optional, List, Dict, Any

import config as settings
from core import NumericalDerivativeError, DegeneratePostselectionError
from dynamics import (
    Scenario, readout_moments, conditional_readout_moments, conditional_numerator,
    postselection_probability, phase_shifted_postselection_probability,
)

logger = logging.getLogger(__name__)


class DerivativeOrder(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    step: float
    order: DerivativeOrder
    richardson_levels: int
    error_estimate: float

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["order"] = self.order.value
        return data


def _evaluate(fn: Callable[[float], float], x: float) -> float:
    value = float(fn(x))
    if not math.isfinite(value):
        raise NumericalDerivativeError(f"function value at {x!r} is not finite: {value!r}")
    return value


def _stencil(fn: Callable[[float], float], x0: float, h: float, order: DerivativeOrder,
             centre: Optional[float]) -> float:
    forward, backward = _evaluate(fn, x0 + h), _evaluate(fn, x0 - h)
    if order is DerivativeOrder.FIRST:
        return (forward - backward) / (2.0 * h)
    return (forward - 2.0 * centre + backward) / (h * h)


def central_derivative(fn: Callable[[float], float], x0: float, h: float = settings.DEFAULT_STEP,
                       order: DerivativeOrder = DerivativeOrder.FIRST,
                       richardson_levels: int = settings.DEFAULT_RICHARDSON_LEVELS) -> DerivativeEstimate:
    """Central difference at x0 with Richardson extrapolation over steps h, h/2, ..., h/2^levels.

    error_estimate is the difference between the two highest extrapolation levels
    of the final tableau row; with zero levels it is |D(h) - D(h/2)|.
    """
    order = DerivativeOrder(order)
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    if richardson_levels < 0:
        raise ValueError(f"richardson_levels must be >= 0, got {richardson_levels}")

    centre = _evaluate(fn, x0) if order is DerivativeOrder.SECOND else None
    tableau: List[List[float]] = []
    for i in range(richardson_levels + 1):
        row = [_stencil(fn, x0, h / 2 ** i, order, centre)]
        for k in range(1, i + 1):
            factor = 4.0 ** k
            row.append((factor * row[k - 1] - tableau[i - 1][k - 1]) / (factor - 1.0))
        tableau.append(row)

    value = tableau[-1][-1]
    if richardson_levels == 0:
        error = abs(value - _stencil(fn, x0, h / 2, order, centre))
    else:
        error = abs(value - tableau[-1][-2])
    return DerivativeEstimate(value, h, order, richardson_levels, error)


def _conditional(sc: Scenario, conditional: Optional[bool]) -> bool:
    if conditional is None:
        return sc.has_postselection
    if conditional:
        sc.require_postselection()
    return conditional


def fd_variance_growth(sc: Scenario, h: float = settings.DEFAULT_STEP,
                       levels: int = settings.DEFAULT_RICHARDSON_LEVELS,
                       conditional: Optional[bool] = None) -> DerivativeEstimate:
    """d^2/ds^2 of the readout variance at s = 0 (conditional when post-selected)"""
    if _conditional(sc, conditional):
        fn = lambda s: conditional_readout_moments(sc, s).variance
    else:
        fn = lambda s: readout_moments(sc, s).variance
    return central_derivative(fn, 0.0, h, DerivativeOrder.SECOND, levels)


def fd_shift_rate(sc: Scenario, h: float = settings.DEFAULT_STEP,
                  levels: int = settings.DEFAULT_RICHARDSON_LEVELS,
                  conditional: Optional[bool] = None) -> DerivativeEstimate:
    if _conditional(sc, conditional):
        fn = lambda s: conditional_readout_moments(sc, s).mean
    else:
        fn = lambda s: readout_moments(sc, s).mean
    return central_derivative(fn, 0.0, h, DerivativeOrder.FIRST, levels)


def fd_numerator_rate(sc: Scenario, h: float = settings.DEFAULT_STEP,
                      levels: int = settings.DEFAULT_RICHARDSON_LEVELS) -> DerivativeEstimate:
    """d/ds <P_f(s) M(s)> at s = 0, unnormalized"""
    sc.require_postselection()
    return central_derivative(lambda s: conditional_numerator(sc, s), 0.0, h, DerivativeOrder.FIRST, levels)


def fd_postselection_curvature(sc: Scenario, h: float = settings.DEFAULT_STEP,
                               levels: int = settings.DEFAULT_RICHARDSON_LEVELS) -> DerivativeEstimate:
    """p_f''(0) / p_f(0) under the system-only dynamics exp(-i phi_A A / hbar)"""
    probability = postselection_probability(sc)
    if probability < settings.DEGENERATE_POSTSELECTION:
        raise DegeneratePostselectionError(probability)
    raw = central_derivative(
        lambda phi: phase_shifted_postselection_probability(sc, phi), 0.0, h, DerivativeOrder.SECOND, levels
    )
    return DerivativeEstimate(
        raw.value / probability, raw.step, raw.order, raw.richardson_levels, raw.error_estimate / probability
    )
