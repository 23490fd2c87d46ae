"""
End-to-end checks of the closed-form predictions against the exact dynamics
on seeded random scenarios.
"""
import math
from pathlib import Path

import numpy as np
import pytest

from dynamics import readout_moments, conditional_readout_moments
from meters import build_gaussian_cv_meter, meter_correlation_kmb
from numdiff import fd_variance_growth, fd_postselection_curvature
from perturbation import (
    variance_growth_decomposition, conditional_variance_growth, weak_value, weak_value_of_square,
    ozawa_uncertainty, dynamic_pseudovariance, weak_variance, curvature_routes,
)
from scenarios import load_scenario, to_scenario, compare_decompositions

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
S_GRID = (0.05, 0.1, 0.2, 0.4)


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


@pytest.fixture
def meters(qubit_meter, gaussian_meter):
    return qubit_meter, gaussian_meter


def test_variance_is_even_in_s(make_scenario, meters):
    for meter in meters:
        for _ in range(5):
            sc = make_scenario(meter, pure=False)
            for s in S_GRID:
                assert abs(readout_moments(sc, s).variance - readout_moments(sc, -s).variance) < 1e-9
                conditional = conditional_readout_moments(sc, s).variance
                assert abs(conditional - conditional_readout_moments(sc, -s).variance) < 1e-9


def test_unconditioned_growth_matches_oracle(make_scenario, meters):
    for i in range(20):
        sc = make_scenario(meters[i % 2], pure=bool(i % 3), postselected=False)
        assert _relative(variance_growth_decomposition(sc).total, fd_variance_growth(sc).value) < 1e-5


def test_gaussian_unconditioned_growth_is_uncorrelated_noise_free(make_scenario, gaussian_meter):
    for _ in range(5):
        sc = make_scenario(gaussian_meter, pure=False, postselected=False)
        rho, a = sc.system_state.density_matrix(), sc.system_observable
        spread = np.trace(rho @ a @ a).real - np.trace(rho @ a).real ** 2
        assert variance_growth_decomposition(sc).total == pytest.approx(2.0 * spread, abs=1e-6)


def test_conditional_growth_matches_oracle(make_scenario, meters):
    for i in range(20):
        sc = make_scenario(meters[i % 2], pure=bool(i % 3), min_probability=0.05)
        oracle = fd_variance_growth(sc, conditional=True)
        assert _relative(conditional_variance_growth(sc).total, oracle.value) < 1e-5


@pytest.mark.parametrize("sigma_x2", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_gaussian_correlation_constant(sigma_x2, hbar):
    meter = build_gaussian_cv_meter(math.sqrt(sigma_x2), 60, hbar)
    assert meter_correlation_kmb(meter) == pytest.approx(-0.5 * hbar ** 2, abs=1e-6)


def test_pure_state_identities(make_scenario, qubit_meter):
    for _ in range(50):
        sc = make_scenario(qubit_meter, pure=True)
        rho, a, f = sc.system_state, sc.system_observable, sc.postselection
        a_w = weak_value(rho, a, f)
        ozawa = ozawa_uncertainty(rho, a, f)
        v_dyn = dynamic_pseudovariance(rho, a, f)
        assert ozawa == pytest.approx(a_w.imag ** 2, abs=1e-10)
        assert v_dyn == pytest.approx(weak_value_of_square(rho, a, f).real - abs(a_w) ** 2, abs=1e-10)
        assert weak_variance(rho, a, f) == pytest.approx(2.0 * ozawa + v_dyn, abs=1e-10)


def test_curvature_routes_agree(make_scenario, qubit_meter):
    for i in range(20):
        sc = make_scenario(qubit_meter, pure=bool(i % 2), min_probability=0.1)
        via_commutator, via_weak_values = curvature_routes(sc.system_state, sc.system_observable, sc.postselection)
        oracle = fd_postselection_curvature(sc, h=1e-2).value
        scale = max(1.0, abs(via_commutator))
        assert abs(via_commutator - via_weak_values) < 1e-7 * scale
        assert abs(via_commutator - oracle) < 1e-7 * scale
        assert abs(via_weak_values - oracle) < 1e-7 * scale


def test_qubit_meter_cancellation(make_scenario, qubit_meter):
    for i in range(10):
        sc = make_scenario(qubit_meter, pure=bool(i % 2))
        a_w = weak_value(sc.system_state, sc.system_observable, sc.postselection)
        assert conditional_variance_growth(sc).total == pytest.approx(-2.0 * a_w.real ** 2, abs=1e-8)
        for s in np.linspace(0.0, 0.5, 11):
            moments = conditional_readout_moments(sc, float(s))
            assert abs(moments.variance - (1.0 - moments.mean ** 2)) < 1e-12


def test_anomalous_weak_value_regression():
    sc = to_scenario(load_scenario(SAMPLES / "s2_anomalous.toml"))
    rho, a, f = sc.system_state, sc.system_observable, sc.postselection
    a_w = -(2.0 + math.sqrt(3.0))
    assert abs(weak_value(rho, a, f) - a_w) < 1e-10
    assert dynamic_pseudovariance(rho, a, f) == pytest.approx(1.0 - a_w ** 2, abs=1e-8)


def test_non_gaussian_meter_breaks_the_weak_variance_reading():
    table = compare_decompositions(load_scenario(SAMPLES / "fock_nongaussian.toml"))
    assert table.weak_variance_deviation > 10.0 * table.oracle_error_estimate
    assert table.weak_variance_deviation > 1.0
    assert table.oracle_deviation < 1e-4 * max(1.0, abs(table.oracle))
