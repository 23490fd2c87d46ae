"""
Scenario files: TOML with [system], [postselection], [meter], [scan] and
[numdiff] sections plus a top-level hbar.

Complex numbers are written as "re+imj" strings; plain numbers are accepted
as real values. Amplitude vectors whose norm drifts from 1 by less than
NORMALIZATION_DRIFT_TOL are renormalized with a warning, larger drifts are
rejected. Every failure is reported as a ScenarioConfigError naming the field.
"""
from __future__ import annotations

import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union, Tuple, Dict, Any

import numpy as np
import tomli_w

import config as settings
from core import (
    QuantumState, WeakMeterError, ScenarioConfigError, PAULI_X, PAULI_Y, PAULI_Z,
    as_operator, hermiticity_residual,
)
from meters import MeterModel, build_qubit_meter, build_gaussian_cv_meter, build_fock_superposition_meter, build_custom_meter
from dynamics import Scenario

logger = logging.getLogger(__name__)

Vector = Tuple[complex, ...]
Matrix = Tuple[Vector, ...]

NAMED_OBSERVABLES = ("pauli_x", "pauli_y", "pauli_z", "spin_j")
METER_KINDS = ("qubit", "gaussian_cv", "custom")


@dataclass(frozen=True)
class SystemConfig:
    dimension: int
    observable: Union[str, Matrix]
    state: Union[Vector, Matrix]


@dataclass(frozen=True)
class MeterConfig:
    kind: str
    sigma_x2: Optional[float] = None
    cutoff: Optional[int] = None
    readout: Optional[Matrix] = None
    generator: Optional[Matrix] = None
    state: Optional[Union[Vector, Matrix]] = None
    inversion: Optional[Matrix] = None
    label: Optional[str] = None

    @property
    def is_fock(self) -> bool:
        return self.kind == "custom" and self.readout is None


@dataclass(frozen=True)
class ScanConfig:
    s_values: Tuple[float, ...] = (0.0,)


@dataclass(frozen=True)
class NumdiffConfig:
    h: float = settings.DEFAULT_STEP
    richardson_levels: int = settings.DEFAULT_RICHARDSON_LEVELS


@dataclass(frozen=True)
class ScenarioConfig:
    system: SystemConfig
    meter: MeterConfig
    postselection: Optional[Vector] = None
    hbar: float = 1.0
    scan: ScanConfig = field(default_factory=ScanConfig)
    numdiff: NumdiffConfig = field(default_factory=NumdiffConfig)


# ---------------------------------------------------------------------------
# Value parsing
# ---------------------------------------------------------------------------

def parse_complex(value: Any, path: str) -> complex:
    if isinstance(value, bool):
        raise ScenarioConfigError(path, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, str):
        try:
            z = complex(value.replace(" ", "").replace("−", "-"))
        except ValueError:
            raise ScenarioConfigError(path, f"cannot parse complex number {value!r}")
    else:
        raise ScenarioConfigError(path, f"expected a number or 're+imj' string, got {type(value).__name__}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ScenarioConfigError(path, f"non-finite value {value!r}")
    return z


def format_complex(z: complex) -> str:
    imag = repr(float(z.imag))
    sign = "" if imag.startswith("-") else "+"
    return f"{float(z.real)!r}{sign}{imag}j"


def _parse_vector(values: Any, path: str) -> Vector:
    if not isinstance(values, list) or not values:
        raise ScenarioConfigError(path, "expected a non-empty list")
    return tuple(parse_complex(v, f"{path}[{i}]") for i, v in enumerate(values))


def _parse_matrix(rows: Any, path: str) -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ScenarioConfigError(path, "expected a non-empty list of rows")
    matrix = tuple(_parse_vector(r, f"{path}[{i}]") for i, r in enumerate(rows))
    if any(len(r) != len(matrix) for r in matrix):
        raise ScenarioConfigError(path, f"matrix must be square, got {len(matrix)} rows of lengths {[len(r) for r in matrix]}")
    return matrix


def _is_matrix(values: Any) -> bool:
    return isinstance(values, list) and bool(values) and isinstance(values[0], list)


def _normalized_vector(values: Any, path: str) -> Vector:
    vector = _parse_vector(values, path)
    norm = float(np.linalg.norm(np.array(vector)))
    drift = abs(norm - 1.0)
    if drift <= settings.STATE_NORM_TOL:
        return vector
    if drift > settings.NORMALIZATION_DRIFT_TOL:
        raise ScenarioConfigError(path, f"amplitudes have norm {norm!r}; drift above {settings.NORMALIZATION_DRIFT_TOL:.0e}")
    logger.warning(f"Renormalizing {path} (norm drift {drift:.3e})")
    return tuple(z / norm for z in vector)


def _normalized_density(rows: Any, path: str) -> Matrix:
    matrix = _parse_matrix(rows, path)
    trace = sum(matrix[i][i] for i in range(len(matrix))).real
    drift = abs(trace - 1.0)
    if drift <= settings.STATE_NORM_TOL:
        return matrix
    if drift > settings.NORMALIZATION_DRIFT_TOL:
        raise ScenarioConfigError(path, f"density matrix has trace {trace!r}; drift above {settings.NORMALIZATION_DRIFT_TOL:.0e}")
    logger.warning(f"Renormalizing {path} (trace drift {drift:.3e})")
    return tuple(tuple(z / trace for z in row) for row in matrix)


def _parse_state(values: Any, path: str) -> Union[Vector, Matrix]:
    if _is_matrix(values):
        return _normalized_density(values, path)
    return _normalized_vector(values, path)


def _field(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _positive_float(section: Dict[str, Any], key: str, path: str, default: Optional[float] = None) -> Optional[float]:
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise ScenarioConfigError(_field(path, key), f"expected a positive number, got {value!r}")
    return float(value)


def _integer(section: Dict[str, Any], key: str, path: str, minimum: int, default: Optional[int] = None) -> Optional[int]:
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioConfigError(_field(path, key), f"expected an integer >= {minimum}, got {value!r}")
    return value


def _section(data: Dict[str, Any], key: str, required: bool = True) -> Dict[str, Any]:
    section = data.get(key)
    if section is None:
        if required:
            raise ScenarioConfigError(key, "missing section")
        return {}
    if not isinstance(section, dict):
        raise ScenarioConfigError(key, "expected a table")
    return section


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

def _parse_system(section: Dict[str, Any]) -> SystemConfig:
    dimension = _integer(section, "dimension", "system", 1)
    if dimension is None:
        raise ScenarioConfigError("system.dimension", "missing")
    observable = section.get("observable")
    if isinstance(observable, str):
        if observable not in NAMED_OBSERVABLES:
            raise ScenarioConfigError("system.observable", f"unknown observable {observable!r}; expected one of {NAMED_OBSERVABLES}")
    elif observable is None:
        raise ScenarioConfigError("system.observable", "missing")
    else:
        observable = _parse_matrix(observable, "system.observable")
    if "state" not in section:
        raise ScenarioConfigError("system.state", "missing")
    return SystemConfig(dimension, observable, _parse_state(section["state"], "system.state"))


def _parse_postselection(data: Dict[str, Any]) -> Optional[Vector]:
    raw = data.get("postselection")
    if raw is None:
        return None
    if isinstance(raw, dict):
        if "amplitudes" not in raw:
            raise ScenarioConfigError("postselection.amplitudes", "missing")
        return _normalized_vector(raw["amplitudes"], "postselection.amplitudes")
    return _normalized_vector(raw, "postselection")


def _parse_meter(section: Dict[str, Any]) -> MeterConfig:
    kind = section.get("kind")
    if kind not in METER_KINDS:
        raise ScenarioConfigError("meter.kind", f"expected one of {METER_KINDS}, got {kind!r}")
    sigma_x2 = _positive_float(section, "sigma_x2", "meter")
    cutoff = _integer(section, "cutoff", "meter", 2)
    label = section.get("label")
    if label is not None and not isinstance(label, str):
        raise ScenarioConfigError("meter.label", "expected a string")

    if kind == "qubit":
        return MeterConfig(kind, label=label)
    if kind == "gaussian_cv":
        if sigma_x2 is None or cutoff is None:
            raise ScenarioConfigError("meter", "gaussian_cv requires sigma_x2 and cutoff")
        return MeterConfig(kind, sigma_x2, cutoff, label=label)

    if "state" not in section:
        raise ScenarioConfigError("meter.state", "missing")
    if "readout" in section or "generator" in section:
        if "readout" not in section or "generator" not in section:
            raise ScenarioConfigError("meter", "custom meters need both readout and generator")
        inversion = section.get("inversion")
        return MeterConfig(
            kind,
            readout=_parse_matrix(section["readout"], "meter.readout"),
            generator=_parse_matrix(section["generator"], "meter.generator"),
            state=_parse_state(section["state"], "meter.state"),
            inversion=None if inversion is None else _parse_matrix(inversion, "meter.inversion"),
            label=label,
        )
    if sigma_x2 is None or cutoff is None:
        raise ScenarioConfigError("meter", "custom meters need readout/generator matrices or sigma_x2 and cutoff")
    return MeterConfig(kind, sigma_x2, cutoff, state=_normalized_vector(section["state"], "meter.state"), label=label)


def _parse_scan(section: Dict[str, Any]) -> ScanConfig:
    if "s_values" not in section:
        return ScanConfig()
    values = section["s_values"]
    if not isinstance(values, list) or not values:
        raise ScenarioConfigError("scan.s_values", "expected a non-empty list")
    parsed = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ScenarioConfigError(f"scan.s_values[{i}]", f"expected a finite real number, got {v!r}")
        parsed.append(float(v))
    return ScanConfig(tuple(parsed))


def _parse_numdiff(section: Dict[str, Any]) -> NumdiffConfig:
    return NumdiffConfig(
        h=_positive_float(section, "h", "numdiff", settings.DEFAULT_STEP),
        richardson_levels=_integer(section, "richardson_levels", "numdiff", 0, settings.DEFAULT_RICHARDSON_LEVELS),
    )


def parse_scenario(data: Dict[str, Any]) -> ScenarioConfig:
    """Validate a decoded TOML document and build the scenario once to enforce invariants"""
    hbar = _positive_float(data, "hbar", "", 1.0)
    config = ScenarioConfig(
        system=_parse_system(_section(data, "system")),
        meter=_parse_meter(_section(data, "meter")),
        postselection=_parse_postselection(data),
        hbar=hbar,
        scan=_parse_scan(_section(data, "scan", required=False)),
        numdiff=_parse_numdiff(_section(data, "numdiff", required=False)),
    )
    to_scenario(config)
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError:
        raise ScenarioConfigError(str(path), "file not found")
    except tomllib.TOMLDecodeError as e:
        raise ScenarioConfigError(str(path), f"parse error: {e}")
    config = parse_scenario(data)
    logger.info(f"Loaded scenario {path} (system dimension {config.system.dimension}, meter {config.meter.kind})")
    return config


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

def _vector_out(vector: Vector) -> list:
    return [format_complex(z) for z in vector]


def _state_out(state: Union[Vector, Matrix]) -> list:
    if isinstance(state[0], tuple):
        return [_vector_out(row) for row in state]
    return _vector_out(state)


def scenario_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    system = config.system
    data: Dict[str, Any] = {
        "hbar": config.hbar,
        "system": {
            "dimension": system.dimension,
            "observable": system.observable if isinstance(system.observable, str) else _state_out(system.observable),
            "state": _state_out(system.state),
        },
    }
    if config.postselection is not None:
        data["postselection"] = {"amplitudes": _vector_out(config.postselection)}

    meter = config.meter
    meter_out: Dict[str, Any] = {"kind": meter.kind}
    for key in ("sigma_x2", "cutoff", "label"):
        if getattr(meter, key) is not None:
            meter_out[key] = getattr(meter, key)
    for key in ("readout", "generator", "state", "inversion"):
        if getattr(meter, key) is not None:
            meter_out[key] = _state_out(getattr(meter, key))
    data["meter"] = meter_out
    data["scan"] = {"s_values": list(config.scan.s_values)}
    data["numdiff"] = {"h": config.numdiff.h, "richardson_levels": config.numdiff.richardson_levels}
    return data


def dump_scenario(config: ScenarioConfig, path: Union[str, Path]):
    """Write a config so that load_scenario(path) == config"""
    path = Path(path)
    with path.open("wb") as handle:
        tomli_w.dump(scenario_to_dict(config), handle)
    logger.info(f"Wrote scenario {path}")


# ---------------------------------------------------------------------------
# Building
# ---------------------------------------------------------------------------

def named_observable(name: str, dimension: int) -> np.ndarray:
    """pauli_x/y/z for a qubit; spin_j is J_z of spin (dimension - 1)/2"""
    if name == "spin_j":
        j = (dimension - 1) / 2.0
        return as_operator(np.diag(j - np.arange(dimension)), "spin_j")
    if dimension != 2:
        raise ScenarioConfigError("system.observable", f"{name} needs dimension 2, got {dimension}")
    return {"pauli_x": PAULI_X, "pauli_y": PAULI_Y, "pauli_z": PAULI_Z}[name]


def _state(values: Union[Vector, Matrix]) -> QuantumState:
    if isinstance(values[0], tuple):
        return QuantumState.mixed(np.array(values, dtype=np.complex128))
    return QuantumState.pure(np.array(values, dtype=np.complex128))


def _build_meter(meter: MeterConfig, hbar: float) -> MeterModel:
    if meter.kind == "qubit":
        return build_qubit_meter(hbar)
    if meter.kind == "gaussian_cv":
        return build_gaussian_cv_meter(math.sqrt(meter.sigma_x2), meter.cutoff, hbar)
    if meter.is_fock:
        return build_fock_superposition_meter(
            np.array(meter.state), math.sqrt(meter.sigma_x2), meter.cutoff, hbar, label=meter.label or "fock"
        )
    return build_custom_meter(
        np.array(meter.readout), np.array(meter.generator), _state(meter.state),
        None if meter.inversion is None else np.array(meter.inversion),
        hbar=hbar, label=meter.label or "custom",
    )


def to_scenario(config: ScenarioConfig) -> Scenario:
    """Build the Scenario, mapping every invariant failure to its config field"""
    system = config.system
    if isinstance(system.observable, str):
        observable = named_observable(system.observable, system.dimension)
    else:
        observable = np.array(system.observable, dtype=np.complex128)
        if observable.shape[0] != system.dimension:
            raise ScenarioConfigError("system.observable", f"shape {observable.shape} does not match dimension {system.dimension}")
        residual = hermiticity_residual(observable)
        if residual > settings.HERMITIAN_TOL:
            raise ScenarioConfigError("system.observable", f"not Hermitian (residual {residual:.3e})")

    try:
        state = _state(system.state)
    except WeakMeterError as e:
        raise ScenarioConfigError("system.state", str(e))
    if state.dim != system.dimension:
        raise ScenarioConfigError("system.state", f"dimension {state.dim} does not match system dimension {system.dimension}")
    if config.postselection is not None and len(config.postselection) != system.dimension:
        raise ScenarioConfigError("postselection", f"{len(config.postselection)} amplitudes for system dimension {system.dimension}")

    try:
        meter = _build_meter(config.meter, config.hbar)
    except (WeakMeterError, ValueError) as e:
        raise ScenarioConfigError("meter", str(e))

    postselection = None if config.postselection is None else np.array(config.postselection, dtype=np.complex128)
    try:
        return Scenario(observable, state, meter, postselection, config.hbar)
    except WeakMeterError as e:
        raise ScenarioConfigError("scenario", str(e))
