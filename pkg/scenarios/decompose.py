"""
Side-by-side comparison of the conditional growth decomposition, the
weak-variance reading and the finite-difference oracle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, List, Tuple, Dict, Any

from rich.console import Console
from rich.table import Table

import config as settings
from numdiff import fd_variance_growth
from perturbation import GrowthReport, conditional_variance_growth, weak_variance, dynamic_pseudovariance, ozawa_uncertainty
from .loader import ScenarioConfig, to_scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecompositionTable:
    growth: GrowthReport
    weak_variance_reading: Optional[float]
    oracle: float
    oracle_error_estimate: float
    ozawa: float
    v_dyn: float

    @property
    def rows(self) -> List[Tuple[str, Optional[float]]]:
        return [
            ("Ozawa term", self.growth.term_linear_response),
            ("response-fluctuation term", self.growth.term_response_fluctuation),
            ("saturation term", self.growth.term_saturation),
            ("Bayesian-update term", self.growth.term_bayesian_update),
            ("total", self.growth.total),
            ("weak-variance reading", self.weak_variance_reading),
            ("FD oracle", self.oracle),
        ]

    @property
    def oracle_deviation(self) -> float:
        return abs(self.growth.total - self.oracle)

    @property
    def consistent(self) -> bool:
        return self.oracle_deviation <= settings.DECOMPOSITION_TOL * max(1.0, abs(self.oracle))

    @property
    def weak_variance_deviation(self) -> Optional[float]:
        if self.weak_variance_reading is None:
            return None
        return abs(self.weak_variance_reading - self.growth.total)

    @property
    def verdict(self) -> str:
        return "consistent" if self.consistent else "inconsistent"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": settings.REPORT_SCHEMA,
            "rows": [{"term": name, "value": value} for name, value in self.rows],
            "ozawa": self.ozawa,
            "v_dyn": self.v_dyn,
            "oracle_error_estimate": self.oracle_error_estimate,
            "oracle_deviation": self.oracle_deviation,
            "weak_variance_deviation": self.weak_variance_deviation,
            "verdict": self.verdict,
            "advisories": list(self.growth.advisories),
        }

    def render(self, console: Optional[Console] = None):
        console = console or Console(stderr=True)
        table = Table(title="Conditional variance growth at s = 0")
        table.add_column("term")
        table.add_column("value", justify="right")
        for name, value in self.rows:
            table.add_row(name, "n/a" if value is None else f"{value:.10g}")
        console.print(table)
        style = "green" if self.consistent else "red"
        console.print(f"[{style}]{self.verdict}[/{style}]: |total - oracle| = {self.oracle_deviation:.3e}")
        for note in self.growth.advisories:
            console.print(f"[yellow]advisory[/yellow]: {note}")


def compare_decompositions(config: ScenarioConfig) -> DecompositionTable:
    """Ozawa + V_dyn decomposition against the weak-variance reading and the oracle.

    The weak-variance reading is <Gamma_M>^2 times the weak variance, which is what a
    Gaussian-meter analysis would attribute the growth to; it is None for mixed states.
    """
    sc = to_scenario(config)
    f = sc.require_postselection()
    rho, a = sc.system_state, sc.system_observable
    growth = conditional_variance_growth(sc)
    oracle = fd_variance_growth(sc, config.numdiff.h, config.numdiff.richardson_levels, conditional=True)
    reading = None
    if rho.is_pure:
        reading = sc.meter.response_mean ** 2 * weak_variance(rho, a, f)
    table = DecompositionTable(
        growth=growth.with_oracle(oracle.value, oracle.error_estimate),
        weak_variance_reading=reading,
        oracle=oracle.value,
        oracle_error_estimate=oracle.error_estimate,
        ozawa=ozawa_uncertainty(rho, a, f),
        v_dyn=dynamic_pseudovariance(rho, a, f, sc.hbar),
    )
    if not table.consistent:
        logger.warning(f"Decomposition total deviates from the oracle by {table.oracle_deviation:.3e}")
    return table
