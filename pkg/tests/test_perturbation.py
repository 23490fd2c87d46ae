"""
Shift rates, growth decompositions and the projector-product derivative
"""
import math

import numpy as np
import pytest

from core import QuantumState, PAULI_X, PAULI_Z
from dynamics import Scenario
from meters import build_custom_meter, build_fock_superposition_meter
from numdiff import fd_variance_growth, fd_shift_rate, fd_numerator_rate
from perturbation import (
    GrowthReport, unconditioned_shift_rate, variance_growth_decomposition, conditional_shift_rate,
    conditional_variance_growth, projector_product_derivative, gaussian_conditional_growth, weak_value,
)
from conftest import SQRT_HALF

ANOMALOUS = -(2.0 + math.sqrt(3.0))
ZERO = np.array([1.0, 0.0])


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def test_unconditioned_shift_rate_examples(plus_state, qubit_meter):
    assert unconditioned_shift_rate(Scenario(PAULI_Z, plus_state, qubit_meter)) == pytest.approx(0.0, abs=1e-15)
    assert unconditioned_shift_rate(Scenario(PAULI_Z, QuantumState.basis(2, 0), qubit_meter)) == pytest.approx(1.0)


def test_unconditioned_shift_rate_matches_oracle(make_scenario, qubit_meter, gaussian_meter):
    for meter in (qubit_meter, gaussian_meter):
        sc = make_scenario(meter, pure=False, postselected=False)
        assert unconditioned_shift_rate(sc) == pytest.approx(fd_shift_rate(sc, h=1e-4).value, abs=1e-7)


def test_gaussian_unconditioned_growth_is_twice_the_system_variance(gaussian_meter, plus_state):
    report = variance_growth_decomposition(Scenario(PAULI_Z, plus_state, gaussian_meter))
    assert report.term_linear_response == pytest.approx(2.0, abs=1e-12)
    assert report.term_response_fluctuation == pytest.approx(0.0, abs=1e-12)
    assert report.term_saturation == pytest.approx(0.0, abs=1e-12)
    assert report.total == pytest.approx(2.0, abs=1e-12)
    assert report.advisories == ()


def test_qubit_unconditioned_growth_cancels(qubit_meter, plus_state):
    report = variance_growth_decomposition(Scenario(PAULI_Z, plus_state, qubit_meter))
    assert (report.term_linear_response, report.term_response_fluctuation, report.term_saturation) == pytest.approx(
        (2.0, 0.0, -2.0), abs=1e-12
    )
    assert report.total == pytest.approx(0.0, abs=1e-12)
    assert report.term_bayesian_update == 0.0


def test_conditional_shift_rate_examples(plus_state, anomalous_postselection, imaginary_case, qubit_meter):
    sc = Scenario(PAULI_Z, plus_state, qubit_meter, anomalous_postselection)
    assert conditional_shift_rate(sc) == pytest.approx(ANOMALOUS, abs=1e-10)
    psi, a, f = imaginary_case
    assert conditional_shift_rate(Scenario(a, psi, qubit_meter, f)) == pytest.approx(0.0, abs=1e-12)


def test_conditional_shift_rate_matches_oracle(make_scenario, qubit_meter, gaussian_meter):
    for meter in (qubit_meter, gaussian_meter):
        sc = make_scenario(meter, pure=False)
        assert conditional_shift_rate(sc) == pytest.approx(fd_shift_rate(sc, conditional=True).value, abs=1e-6)


def test_qubit_conditional_growth_cancels_to_minus_twice_weak_value_squared(make_scenario, qubit_meter):
    for pure in (True, False):
        sc = make_scenario(qubit_meter, pure=pure)
        report = conditional_variance_growth(sc)
        a_w = weak_value(sc.system_state, sc.system_observable, sc.postselection)
        assert report.term_bayesian_update == pytest.approx(0.0, abs=1e-15)
        assert report.total == pytest.approx(-2.0 * a_w.real ** 2, abs=1e-8)


def test_gaussian_conditional_growth_closure(make_scenario, gaussian_meter):
    for pure in (True, False):
        sc = make_scenario(gaussian_meter, pure=pure)
        report = conditional_variance_growth(sc)
        closed_form = gaussian_conditional_growth(sc.system_state, sc.system_observable, sc.postselection)
        assert report.total == pytest.approx(closed_form, abs=2e-4)


def test_anomalous_gaussian_growth_is_the_weak_variance(plus_state, anomalous_postselection, gaussian_meter):
    report = conditional_variance_growth(Scenario(PAULI_Z, plus_state, gaussian_meter, anomalous_postselection))
    assert report.term_linear_response == pytest.approx(0.0, abs=1e-10)
    assert report.total == pytest.approx(1.0 - ANOMALOUS ** 2, abs=1e-6)


def test_growth_report_terms_add_up(make_scenario, gaussian_meter):
    report = conditional_variance_growth(make_scenario(gaussian_meter, pure=False))
    terms = (report.term_linear_response + report.term_response_fluctuation
             + report.term_saturation + report.term_bayesian_update)
    assert report.total == pytest.approx(terms, abs=1e-12)
    assert report.conditional


def test_growth_report_oracle_fields():
    report = GrowthReport.from_terms(1.0, 0.5, -0.25).with_oracle(1.3, 1e-9)
    assert report.total == 1.25
    assert report.oracle_deviation == pytest.approx(0.05)
    data = report.to_dict()
    assert data["oracle"] == 1.3
    assert data["oracle_deviation"] == pytest.approx(0.05)
    assert data["advisories"] == []


def test_projector_product_examples(plus_state, qubit_meter):
    sc = Scenario(PAULI_Z, plus_state, qubit_meter, ZERO)
    assert projector_product_derivative(sc) == pytest.approx((0.5, 0.0), abs=1e-15)


def test_projector_product_matches_oracle(make_scenario, qubit_meter, gaussian_meter):
    for meter in (qubit_meter, gaussian_meter):
        sc = make_scenario(meter, pure=False)
        anticommutator_term, back_action_term = projector_product_derivative(sc)
        assert back_action_term == pytest.approx(0.0, abs=1e-12)
        assert anticommutator_term + back_action_term == pytest.approx(fd_numerator_rate(sc).value, abs=1e-6)


def test_biased_meter_back_action_matches_oracle(make_scenario):
    # M = sigma_x, B = (sigma_x + sigma_z)/2 in |0>: <BM + MB> = 1
    meter = build_custom_meter(PAULI_X, 0.5 * (PAULI_X + PAULI_Z), QuantumState.basis(2, 0))
    sc = make_scenario(meter, pure=False)
    anticommutator_term, back_action_term = projector_product_derivative(sc)
    assert meter.mb_correlation == pytest.approx(1.0)
    assert anticommutator_term + back_action_term == pytest.approx(fd_numerator_rate(sc).value, abs=1e-6)
    assert any("<BM+MB>" in note for note in conditional_variance_growth(sc).advisories)


def test_odd_parity_meter_growth_is_advisory(plus_state):
    meter = build_fock_superposition_meter([SQRT_HALF, SQRT_HALF], math.sqrt(0.5), 30)
    report = variance_growth_decomposition(Scenario(PAULI_Z, plus_state, meter))
    assert any("advisory" in note for note in report.advisories)


def test_unconditioned_growth_matches_oracle(make_scenario, qubit_meter, gaussian_meter):
    for meter in (qubit_meter, gaussian_meter):
        sc = make_scenario(meter, pure=False, postselected=False)
        oracle = fd_variance_growth(sc)
        assert _relative(variance_growth_decomposition(sc).total, oracle.value) < 1e-5
