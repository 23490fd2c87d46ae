"""
Closed-form first and second s-derivatives of the meter readout at s = 0.

Each second-order result is returned as a GrowthReport whose terms separate
the linear response, the response fluctuations, the saturation and (for
post-selected statistics) the Bayesian update of the meter fluctuations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace, asdict
from typing import Optional, List, Tuple, Dict, Any

import numpy as np

import config as settings
from core import expectation
from dynamics import Scenario
from meters import validate_meter_symmetry
from .weak_values import (
    weak_value, sandwiched_second_moment, ozawa_uncertainty, postselection_curvature,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthReport:
    """Term-by-term d^2(variance)/ds^2 at s = 0"""
    total: float
    term_linear_response: float
    term_response_fluctuation: float
    term_saturation: float
    term_bayesian_update: float = 0.0
    oracle: Optional[float] = None
    oracle_error_estimate: Optional[float] = None
    conditional: bool = False
    advisories: Tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_terms(cls, linear_response: float, response_fluctuation: float, saturation: float,
                   bayesian_update: float = 0.0, conditional: bool = False,
                   advisories: Tuple[str, ...] = ()) -> "GrowthReport":
        total = linear_response + response_fluctuation + saturation + bayesian_update
        return cls(total, linear_response, response_fluctuation, saturation, bayesian_update,
                   conditional=conditional, advisories=tuple(advisories))

    def with_oracle(self, value: float, error_estimate: Optional[float] = None) -> "GrowthReport":
        return replace(self, oracle=value, oracle_error_estimate=error_estimate)

    @property
    def oracle_deviation(self) -> Optional[float]:
        return None if self.oracle is None else abs(self.total - self.oracle)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["advisories"] = list(self.advisories)
        data["oracle_deviation"] = self.oracle_deviation
        return data


def _system_moments(sc: Scenario) -> Tuple[float, float]:
    a = sc.system_observable
    return expectation(sc.system_state, a).real, expectation(sc.system_state, a @ a).real


def _symmetry_advisories(sc: Scenario, require_unbiased: bool) -> List[str]:
    report = validate_meter_symmetry(sc.meter)
    notes = []
    if not report.symmetric:
        notes.append("meter symmetry conditions not satisfied; second-order formula is advisory")
    if require_unbiased and not report.unbiased_mb_ok:
        notes.append("<BM+MB> != 0; conditional formulas assume an unbiased meter")
    return notes


def unconditioned_shift_rate(sc: Scenario) -> float:
    """d<M(s)>/ds at s = 0: <Gamma_M><A>"""
    mean_a, _ = _system_moments(sc)
    return sc.meter.response_mean * mean_a


def variance_growth_decomposition(sc: Scenario) -> GrowthReport:
    """2<Gamma>^2 dA^2 + 2 dGamma^2 <A^2> - <M Theta + Theta M><A^2>"""
    meter = sc.meter
    mean_a, mean_a2 = _system_moments(sc)
    return GrowthReport.from_terms(
        linear_response=2.0 * meter.response_mean ** 2 * (mean_a2 - mean_a ** 2),
        response_fluctuation=2.0 * meter.response_variance * mean_a2,
        saturation=-meter.saturation_correlation * mean_a2,
        advisories=tuple(_symmetry_advisories(sc, require_unbiased=False)),
    )


def conditional_shift_rate(sc: Scenario) -> float:
    """d<M(s|f)>/ds at s = 0: <Gamma_M> Re A_w"""
    for note in _symmetry_advisories(sc, require_unbiased=True):
        logger.warning(note)
    a_w = weak_value(sc.system_state, sc.system_observable, sc.require_postselection())
    return sc.meter.response_mean * a_w.real


def conditional_variance_growth(sc: Scenario) -> GrowthReport:
    """Post-selected growth: Ozawa, response-fluctuation, saturation and Bayesian-update terms"""
    f = sc.require_postselection()
    rho, a, meter = sc.system_state, sc.system_observable, sc.meter
    sandwich = sandwiched_second_moment(rho, a, f)
    advisories = _symmetry_advisories(sc, require_unbiased=True)
    if abs(meter.squared_commutator_moment) > settings.SYMMETRY_TOL:
        advisories.append(
            f"Im<B^2 M^2> = {meter.squared_commutator_moment:.3e}; the Bayesian-update term assumes it vanishes"
        )
    return GrowthReport.from_terms(
        linear_response=2.0 * meter.response_mean ** 2 * ozawa_uncertainty(rho, a, f),
        response_fluctuation=2.0 * meter.response_variance * sandwich,
        saturation=-meter.saturation_correlation * sandwich,
        bayesian_update=meter.kmb * postselection_curvature(rho, a, f, sc.hbar),
        conditional=True,
        advisories=tuple(advisories),
    )


def projector_product_derivative(sc: Scenario) -> Tuple[float, float]:
    """d/ds <P_f(s) M(s)> at s = 0 split into (anticommutator term, back-action term).

    The anticommutator term is <Gamma_M> Re<f|A rho|f>; the back-action term is
    (1/hbar) Im<f|A rho|f> <BM + MB> and vanishes for an unbiased meter.
    """
    f = sc.require_postselection()
    numerator = complex(np.vdot(f, sc.system_observable @ sc.system_state.density_matrix() @ f))
    anticommutator_term = sc.meter.response_mean * numerator.real
    back_action_term = numerator.imag * sc.meter.mb_correlation / sc.hbar
    return anticommutator_term, back_action_term
