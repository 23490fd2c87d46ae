"""
Commands exposed by the command line: scan, decompose and validate
"""
from abc import ABC, abstractmethod
from typing import Dict, Any, List, Optional
import logging

import config as settings
from core import (
    WeakMeterError, DegeneratePostselectionError, ConsistencyError,
)
from meters import validate_meter_symmetry
from scenarios import load_scenario, run_scan, compare_decompositions, to_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_CONSISTENCY = 4


def exit_code_for(error: Exception) -> int:
    """Map library errors onto the documented exit codes"""
    if isinstance(error, DegeneratePostselectionError):
        return EXIT_DEGENERATE
    if isinstance(error, ConsistencyError):
        return EXIT_CONSISTENCY
    if isinstance(error, (WeakMeterError, ValueError)):
        return EXIT_CONFIG
    return 1


def _result(success: bool, result: Any, message: str, exit_code: int = EXIT_OK, **metadata) -> Dict[str, Any]:
    return {
        'success': success,
        'result': result,
        'message': message,
        'metadata': {'exit_code': exit_code, **metadata},
    }


class BaseCommand(ABC):
    """Abstract base class for all commands"""

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description

    @abstractmethod
    def execute(self, config_path: str, **kwargs) -> Dict[str, Any]:
        """
        Run the command on a scenario file

        Returns:
            Dict containing:
                - success: bool indicating if execution was successful
                - result: JSON-ready result data
                - message: Human-readable message
                - metadata: exit_code plus command-specific details
        """
        pass

    def get_info(self) -> Dict[str, Any]:
        """Get command information"""
        return {
            'name': self.name,
            'description': self.description,
        }


class ScanCommand(BaseCommand):
    def __init__(self):
        super().__init__("scan", "Exact readout statistics over the s grid plus the formula/oracle report")

    def execute(self, config_path: str, out_dir: Optional[str] = None, **kwargs) -> Dict[str, Any]:
        config = load_scenario(config_path)
        scan = run_scan(config, out_dir)
        where = f" to {out_dir}" if out_dir else ""
        return _result(True, scan.report, f"Scanned {len(scan.rows)} s values{where}",
                       rows=len(scan.rows), csv_path=str(scan.csv_path) if scan.csv_path else None)


class DecomposeCommand(BaseCommand):
    def __init__(self):
        super().__init__("decompose", "Conditional growth terms against the weak-variance reading and the oracle")

    def execute(self, config_path: str, **kwargs) -> Dict[str, Any]:
        table = compare_decompositions(load_scenario(config_path))
        if table.consistent:
            return _result(True, table.to_dict(), "Decomposition matches the finite-difference oracle", table=table)
        return _result(False, table.to_dict(),
                       f"Decomposition total deviates from the oracle by {table.oracle_deviation:.3e}",
                       EXIT_CONSISTENCY, table=table)


class ValidateCommand(BaseCommand):
    def __init__(self):
        super().__init__("validate", "Meter symmetry and unbiasedness report")

    def execute(self, config_path: str, **kwargs) -> Dict[str, Any]:
        sc = to_scenario(load_scenario(config_path))
        report = validate_meter_symmetry(sc.meter)
        result = {'schema': settings.REPORT_SCHEMA, 'meter': sc.meter.label, **report.to_dict()}
        message = "All symmetry conditions hold" if report.all_ok else f"{len(report.advisories())} advisory flag(s)"
        return _result(True, result, message, report=report)


class CommandManager:
    """Registry of the available commands"""

    def __init__(self):
        self.commands: Dict[str, BaseCommand] = {}

    def register_command(self, command: BaseCommand):
        self.commands[command.name] = command
        logger.info(f"Registered command: {command.name}")

    def execute_command(self, name: str, config_path: str, **kwargs) -> Dict[str, Any]:
        """Execute a command; library errors become a failed result carrying the exit code"""
        if name not in self.commands:
            return _result(False, None, f"Command {name} not found", 1)

        command = self.commands[name]
        try:
            return command.execute(config_path, **kwargs)
        except (WeakMeterError, ValueError) as e:
            code = exit_code_for(e)
            logger.error(f"Error executing command {name}: {e}")
            return _result(False, None, str(e), code, error=type(e).__name__)

    def list_commands(self) -> List[Dict[str, Any]]:
        return [command.get_info() for command in self.commands.values()]


def default_manager() -> CommandManager:
    manager = CommandManager()
    for command in (ScanCommand(), DecomposeCommand(), ValidateCommand()):
        manager.register_command(command)
    return manager
