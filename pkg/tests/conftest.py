"""
Shared fixtures: reference states, meters and seeded random scenarios
"""
import math

import numpy as np
import pytest

from core import QuantumState, PAULI_Z
from dynamics import Scenario, postselection_probability
from meters import build_qubit_meter, build_gaussian_cv_meter

SQRT_HALF = 1.0 / math.sqrt(2.0)
SEED = 20240611


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def plus_state():
    return QuantumState.pure([SQRT_HALF, SQRT_HALF])


@pytest.fixture
def anomalous_postselection():
    # cos(pi/3)|0> - sin(pi/3)|1>
    return np.array([0.5, -math.sqrt(3.0) / 2.0], dtype=np.complex128)


@pytest.fixture
def imaginary_case():
    """psi = (|0> + i|1>)/sqrt 2, f = |+>: A_w = -i for A = sigma_z"""
    psi = QuantumState.pure([SQRT_HALF, 1j * SQRT_HALF])
    f = np.array([SQRT_HALF, SQRT_HALF], dtype=np.complex128)
    return psi, PAULI_Z, f


@pytest.fixture(scope="session")
def qubit_meter():
    return build_qubit_meter()


@pytest.fixture(scope="session")
def gaussian_meter():
    return build_gaussian_cv_meter(math.sqrt(0.5), 60)


def random_hermitian(rng, dim: int) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + x.conj().T) / (2.0 * math.sqrt(dim))


def random_vector(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim: int) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def make_scenario(rng):
    """Factory for random scenarios with system dimension 2-4 and p_f above a floor"""

    def _make(meter, pure=True, postselected=True, min_probability=0.05, hbar=1.0) -> Scenario:
        while True:
            dim = int(rng.integers(2, 5))
            a = random_hermitian(rng, dim)
            if pure:
                state = QuantumState.pure(random_vector(rng, dim))
            else:
                state = QuantumState.mixed(random_density(rng, dim))
            f = random_vector(rng, dim) if postselected else None
            sc = Scenario(a, state, meter, f, hbar)
            if not postselected or postselection_probability(sc) > min_probability:
                return sc

    return _make
