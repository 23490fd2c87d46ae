"""
Meter builders, derived operators and symmetry validation
"""
import math

import numpy as np
import pytest

from core import QuantumState, PAULI_X, PAULI_Y, PAULI_Z, expectation, variance, InvalidMeterError, TruncationLeakError
from meters import (
    build_qubit_meter, build_gaussian_cv_meter, build_fock_superposition_meter, build_custom_meter,
    meter_response, meter_saturation, meter_correlation_kmb, validate_meter_symmetry,
    quadrature_operators, parity_operator, truncated_dimension,
)
from conftest import SQRT_HALF


def test_qubit_meter_derived_operators(qubit_meter):
    np.testing.assert_allclose(meter_response(qubit_meter), PAULI_Z, atol=1e-15)
    np.testing.assert_allclose(meter_saturation(qubit_meter), qubit_meter.readout, atol=1e-15)
    assert qubit_meter.response_mean == pytest.approx(1.0)
    assert meter_correlation_kmb(qubit_meter) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_qubit_meter_response_is_independent_of_hbar(hbar):
    meter = build_qubit_meter(hbar)
    np.testing.assert_allclose(meter.response, PAULI_Z, atol=1e-15)


def test_qubit_meter_passes_symmetry_checks(qubit_meter):
    report = validate_meter_symmetry(qubit_meter)
    assert report.all_ok
    assert report.advisories() == []


def test_custom_meter_with_qubit_inputs_equals_qubit_meter(qubit_meter):
    meter = build_custom_meter(PAULI_X, PAULI_Y / 2, QuantumState.basis(2, 0), PAULI_Z)
    assert meter == qubit_meter


def test_gaussian_meter_moments(gaussian_meter):
    x, p = gaussian_meter.readout, gaussian_meter.generator
    state = gaussian_meter.state
    assert variance(state, x) == pytest.approx(0.5, abs=1e-10)
    assert expectation(state, x) == pytest.approx(0.0, abs=1e-15)
    assert expectation(state, p) == pytest.approx(0.0, abs=1e-15)
    assert math.sqrt(variance(state, x) * variance(state, p)) == pytest.approx(0.5, abs=1e-8)
    assert gaussian_meter.response_mean == pytest.approx(1.0, abs=1e-12)
    assert gaussian_meter.response_variance == pytest.approx(0.0, abs=1e-12)


def test_gaussian_meter_response_is_identity_below_truncation_edge(gaussian_meter):
    dim = gaussian_meter.dim
    np.testing.assert_allclose(meter_response(gaussian_meter)[:dim - 1, :dim - 1], np.eye(dim - 1), atol=1e-12)
    np.testing.assert_allclose(meter_saturation(gaussian_meter)[:dim - 2, :dim - 2], 0.0, atol=1e-12)


@pytest.mark.parametrize("sigma_x2", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_gaussian_meter_correlation_constant(sigma_x2, hbar):
    meter = build_gaussian_cv_meter(math.sqrt(sigma_x2), 60, hbar)
    assert meter_correlation_kmb(meter) == pytest.approx(-hbar ** 2 / 2, abs=1e-6)


def test_gaussian_meter_passes_symmetry_checks(gaussian_meter):
    assert validate_meter_symmetry(gaussian_meter).all_ok


def test_meter_with_unit_square_readout_has_zero_kmb():
    meter = build_custom_meter(PAULI_Z, PAULI_X + 0.3 * PAULI_Y, QuantumState.pure([0.6, 0.8]))
    assert meter_correlation_kmb(meter) == pytest.approx(0.0, abs=1e-14)


def test_commuting_pair_has_zero_response():
    meter = build_custom_meter(PAULI_X, PAULI_X, QuantumState.basis(2, 0))
    np.testing.assert_array_equal(meter_response(meter), np.zeros((2, 2)))


def test_even_fock_superposition_is_symmetric_with_gaussian_constant():
    meter = build_fock_superposition_meter([SQRT_HALF, 0, SQRT_HALF], math.sqrt(0.5), 60)
    report = validate_meter_symmetry(meter)
    assert report.all_ok
    # (|0> + |2>)/sqrt 2 happens to share K = -hbar^2/2 with the vacuum
    assert meter.kmb == pytest.approx(-0.5, abs=1e-12)


def test_fock_superposition_zero_four_has_non_gaussian_constant():
    meter = build_fock_superposition_meter([SQRT_HALF, 0, 0, 0, SQRT_HALF], math.sqrt(0.5), 60)
    assert validate_meter_symmetry(meter).all_ok
    assert meter.kmb == pytest.approx(-1.5 - math.sqrt(6.0) / 2, abs=1e-10)
    assert meter.squared_commutator_moment == pytest.approx(0.0, abs=1e-12)


def test_odd_parity_component_fails_state_check():
    meter = build_fock_superposition_meter([SQRT_HALF, SQRT_HALF], math.sqrt(0.5), 60)
    report = validate_meter_symmetry(meter)
    assert report.state_parity_ok is False
    assert report.spectrum_symmetric and report.generator_odd_ok
    assert not report.symmetric
    assert any("inversion invariant" in note for note in report.advisories())


def test_number_state_one_is_flagged_but_keeps_width():
    meter = build_fock_superposition_meter([0, 1], math.sqrt(0.5), 60)
    assert validate_meter_symmetry(meter).state_parity_ok is False
    assert variance(meter.state, meter.readout) == pytest.approx(1.5, abs=1e-10)


def test_meter_without_inversion_reports_not_applicable():
    meter = build_custom_meter(PAULI_X, PAULI_Y / 2, QuantumState.basis(2, 0))
    report = validate_meter_symmetry(meter)
    assert report.spectrum_symmetric is None
    assert report.unbiased_mb_ok
    assert not report.symmetric


def test_custom_meter_rejects_non_hermitian_readout():
    with pytest.raises(InvalidMeterError) as info:
        build_custom_meter(np.array([[0, 1], [0, 0]]), PAULI_Y, QuantumState.basis(2, 0))
    assert info.value.residual == pytest.approx(1.0)


def test_custom_meter_rejects_non_unitary_inversion():
    with pytest.raises(InvalidMeterError):
        build_custom_meter(PAULI_X, PAULI_Y, QuantumState.basis(2, 0), 2 * PAULI_Z)


def test_fock_weight_above_cutoff_is_rejected():
    with pytest.raises(TruncationLeakError) as info:
        build_fock_superposition_meter([0, 0, 0, 1], 1.0, 2)
    assert info.value.tail_probability == pytest.approx(1.0)


def test_quadratures_and_parity():
    x, p = quadrature_operators(0.5, 10)
    dim = truncated_dimension(10)
    assert x.shape == (dim, dim)
    u = parity_operator(dim)
    np.testing.assert_allclose(u @ x @ u, -x, atol=1e-15)
    np.testing.assert_allclose(u @ p @ u, -p, atol=1e-15)
    np.testing.assert_allclose((x @ p - p @ x)[:dim - 1, :dim - 1], 1j * np.eye(dim - 1), atol=1e-12)
