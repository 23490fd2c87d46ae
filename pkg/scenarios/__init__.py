"""
Scenario files, scans and decomposition reports
"""

from .loader import (
    ScenarioConfig, SystemConfig, MeterConfig, ScanConfig, NumdiffConfig,
    load_scenario, parse_scenario, dump_scenario, to_scenario, named_observable,
)
from .scan import ScanRow, ScanResult, run_scan, scan_rows
from .decompose import DecompositionTable, compare_decompositions

__all__ = [
    'ScenarioConfig',
    'SystemConfig',
    'MeterConfig',
    'ScanConfig',
    'NumdiffConfig',
    'load_scenario',
    'parse_scenario',
    'dump_scenario',
    'to_scenario',
    'named_observable',
    'ScanRow',
    'ScanResult',
    'run_scan',
    'scan_rows',
    'DecompositionTable',
    'compare_decompositions',
]
