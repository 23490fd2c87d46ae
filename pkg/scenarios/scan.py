"""
s-grid scans over the exact dynamics and the JSON report that sets every
closed-form prediction next to its finite-difference oracle.
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, field
from pathlib import Path
from typing import Optional, List, Dict, Any, Union

import pandas as pd
from tqdm import tqdm

import config as settings
from core import Config, ConsistencyError
from dynamics import Scenario, readout_moments, conditional_readout_moments, meter_truncation_tail
from meters import validate_meter_symmetry
from numdiff import fd_variance_growth, fd_shift_rate, fd_numerator_rate, fd_postselection_curvature
from perturbation import (
    unconditioned_shift_rate, variance_growth_decomposition, conditional_shift_rate,
    conditional_variance_growth, projector_product_derivative, weak_statistics,
)
from .loader import ScenarioConfig, to_scenario

logger = logging.getLogger(__name__)

CSV_NAME = "scan.csv"
REPORT_NAME = "report.json"
UNCONDITIONED_COLUMNS = ["s", "mean", "variance"]
CONDITIONAL_COLUMNS = ["s", "p_f", "mean", "variance", "conditional_mean", "conditional_variance"]


@dataclass(frozen=True)
class ScanRow:
    s: float
    mean: float
    variance: float
    p_f: Optional[float] = None
    conditional_mean: Optional[float] = None
    conditional_variance: Optional[float] = None
    truncation_tail: Optional[float] = field(default=None, compare=False)

    def to_record(self) -> Dict[str, float]:
        record = asdict(self)
        record.pop("truncation_tail")
        return {k: v for k, v in record.items() if v is not None}


@dataclass
class ScanResult:
    rows: List[ScanRow]
    report: Dict[str, Any]
    csv_path: Optional[Path] = None
    report_path: Optional[Path] = None

    def to_frame(self) -> pd.DataFrame:
        columns = CONDITIONAL_COLUMNS if self.report["scenario"]["postselected"] else UNCONDITIONED_COLUMNS
        return pd.DataFrame([row.to_record() for row in self.rows], columns=columns)


def scan_row(sc: Scenario, s: float) -> ScanRow:
    moments = readout_moments(sc, s)
    tail = meter_truncation_tail(sc, s)
    if tail is not None and tail > settings.TRUNCATION_TAIL_TOL:
        logger.warning(
            f"Meter occupation {tail:.3e} above Fock level {sc.meter.cutoff} at s={s!r}; raise the cutoff"
        )
    row = ScanRow(s, moments.mean, moments.variance, truncation_tail=tail)
    if sc.has_postselection:
        conditional = conditional_readout_moments(sc, s)
        row = ScanRow(s, moments.mean, moments.variance, conditional.postselection_probability,
                      conditional.mean, conditional.variance, tail)
    if not all(math.isfinite(v) for v in row.to_record().values()):
        raise ConsistencyError(f"non-finite readout statistics at s={s!r}")
    return row


def scan_rows(sc: Scenario, s_values) -> List[ScanRow]:
    """Evaluate rows in parallel; order follows s_values"""
    s_values = list(s_values)
    workers = max(1, min(Config.max_workers(), len(s_values)))
    # fill the cached spectra and joint operators before the scenario is shared across threads
    sc.evolve(0.0)
    sc.joint_operators
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = executor.map(lambda s: scan_row(sc, s), s_values)
        return list(tqdm(results, total=len(s_values), desc="scan", unit="s", disable=None))


def _rate_entry(formula: float, oracle) -> Dict[str, Any]:
    return {
        "formula": formula,
        "oracle": oracle.value,
        "oracle_error_estimate": oracle.error_estimate,
        "deviation": abs(formula - oracle.value),
    }


def _truncation_advisories(sc: Scenario, rows: List[ScanRow]) -> List[str]:
    leaks = [row for row in rows if (row.truncation_tail or 0.0) > settings.TRUNCATION_TAIL_TOL]
    if not leaks:
        return []
    worst = max(leaks, key=lambda row: row.truncation_tail)
    return [
        f"meter occupation above Fock level {sc.meter.cutoff} reaches {worst.truncation_tail:.3e} "
        f"at s={worst.s!r}; raise the cutoff for rows with |s| >= {min(abs(row.s) for row in leaks)!r}"
    ]


def build_report(config: ScenarioConfig, sc: Scenario, rows: Optional[List[ScanRow]] = None) -> Dict[str, Any]:
    """Closed-form predictions with their oracles, weak statistics and advisories.

    With scan rows, meter truncation leakage along the s grid is reported as well.
    """
    h, levels = config.numdiff.h, config.numdiff.richardson_levels
    rows = rows or []
    tails = [row.truncation_tail for row in rows if row.truncation_tail is not None]
    symmetry = validate_meter_symmetry(sc.meter)
    advisories: List[str] = list(symmetry.advisories())
    advisories.extend(_truncation_advisories(sc, rows))

    unconditioned_fd = fd_variance_growth(sc, h, levels, conditional=False)
    unconditioned = variance_growth_decomposition(sc).with_oracle(unconditioned_fd.value, unconditioned_fd.error_estimate)
    report: Dict[str, Any] = {
        "schema": settings.REPORT_SCHEMA,
        "scenario": {
            "system_dimension": sc.system_dim,
            "meter": sc.meter.label,
            "meter_dimension": sc.meter.dim,
            "hbar": sc.hbar,
            "postselected": sc.has_postselection,
            "s_values": list(config.scan.s_values),
            "numdiff": {"h": h, "richardson_levels": levels},
        },
        "meter": {
            "response_mean": sc.meter.response_mean,
            "response_variance": sc.meter.response_variance,
            "saturation_correlation": sc.meter.saturation_correlation,
            "kmb": sc.meter.kmb,
        },
        "symmetry": symmetry.to_dict(),
        "truncation_tail": max(tails, default=None),
        "unconditioned_shift_rate": _rate_entry(unconditioned_shift_rate(sc), fd_shift_rate(sc, h, levels, conditional=False)),
        "unconditioned_growth": unconditioned.to_dict(),
    }
    advisories.extend(unconditioned.advisories)

    if sc.has_postselection:
        conditional_fd = fd_variance_growth(sc, h, levels, conditional=True)
        conditional = conditional_variance_growth(sc).with_oracle(conditional_fd.value, conditional_fd.error_estimate)
        anticommutator_term, back_action_term = projector_product_derivative(sc)
        numerator_fd = fd_numerator_rate(sc, h, levels)
        curvature_fd = fd_postselection_curvature(sc, h, levels)
        stats = weak_statistics(sc.system_state, sc.system_observable, sc.postselection, sc.hbar)
        report.update({
            "conditional_shift_rate": _rate_entry(conditional_shift_rate(sc), fd_shift_rate(sc, h, levels, conditional=True)),
            "conditional_growth": conditional.to_dict(),
            "projector_product": {
                "anticommutator_term": anticommutator_term,
                "back_action_term": back_action_term,
                **_rate_entry(anticommutator_term + back_action_term, numerator_fd),
            },
            "weak_statistics": stats.to_dict(),
            "curvature_oracle": curvature_fd.to_dict(),
        })
        advisories.extend(conditional.advisories)

    report["advisories"] = sorted(set(advisories))
    return report


def write_csv(rows: List[ScanRow], path: Path, postselected: bool):
    columns = CONDITIONAL_COLUMNS if postselected else UNCONDITIONED_COLUMNS
    frame = pd.DataFrame([row.to_record() for row in rows], columns=columns)
    frame.to_csv(path, float_format=settings.CSV_FLOAT_FORMAT, lineterminator="\n", index=False)


def write_report(report: Dict[str, Any], path: Path):
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")


def run_scan(config: ScenarioConfig, out_dir: Optional[Union[str, Path]] = None) -> ScanResult:
    """Scan rows plus report; with out_dir, write scan.csv and report.json there.

    A failure after the CSV was written removes it again.
    """
    sc = to_scenario(config)
    csv_path = report_path = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path, report_path = out_dir / CSV_NAME, out_dir / REPORT_NAME

    try:
        rows = scan_rows(sc, config.scan.s_values)
        if csv_path is not None:
            write_csv(rows, csv_path, sc.has_postselection)
        report = build_report(config, sc, rows)
        if report_path is not None:
            write_report(report, report_path)
    except Exception:
        if csv_path is not None and csv_path.exists():
            logger.error(f"Scan failed; removing partial {csv_path}")
            csv_path.unlink()
        raise

    logger.info(f"Scan finished with {len(rows)} rows")
    return ScanResult(rows, report, csv_path, report_path)
