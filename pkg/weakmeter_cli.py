"""
Weak measurement simulator command line

Usage:
    python weakmeter_cli.py scan samples/s2_anomalous.toml --out-dir out/
    python weakmeter_cli.py decompose samples/fock_nongaussian.toml
    python weakmeter_cli.py validate samples/biased_meter.toml

JSON goes to stdout, tables and log messages to stderr.
"""
import argparse
import json
import logging
import sys
from typing import Optional, List

from rich.console import Console
from rich.table import Table

from core import setup_logging
from command_interface import default_manager

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakmeter", description="Weak measurement simulator and verifier")
    parser.add_argument("--log-level", default=None, help="Logging level (default: WEAKMETER_LOG_LEVEL or WARNING)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    scan_parser = subparsers.add_parser("scan", help="Scan the s grid and write scan.csv and report.json")
    scan_parser.add_argument("config", help="Scenario TOML file")
    scan_parser.add_argument("--out-dir", required=True, help="Directory for scan.csv and report.json")

    decompose_parser = subparsers.add_parser("decompose", help="Compare growth decompositions with the oracle")
    decompose_parser.add_argument("config", help="Scenario TOML file")

    validate_parser = subparsers.add_parser("validate", help="Meter symmetry and unbiasedness report")
    validate_parser.add_argument("config", help="Scenario TOML file")
    return parser


def _render_validation(console: Console, result: dict):
    table = Table(title=f"Meter '{result['meter']}' symmetry")
    table.add_column("condition")
    table.add_column("ok")
    table.add_column("residual", justify="right")
    for name, residual in (
        ("spectrum_symmetric", "spectrum_residual"),
        ("state_parity_ok", "state_parity_residual"),
        ("generator_odd_ok", "generator_odd_residual"),
        ("unbiased_mb_ok", "unbiased_mb_residual"),
    ):
        flag, value = result[name], result[residual]
        table.add_row(name, "n/a" if flag is None else str(flag), "n/a" if value is None else f"{value:.3e}")
    console.print(table)
    for note in result["advisories"]:
        console.print(f"[yellow]advisory[/yellow]: {note}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    console = Console(stderr=True)

    kwargs = {"out_dir": args.out_dir} if args.command == "scan" else {}
    response = default_manager().execute_command(args.command, args.config, **kwargs)
    metadata = response["metadata"]

    if response["result"] is not None:
        if args.command == "decompose":
            metadata["table"].render(console)
        elif args.command == "validate":
            _render_validation(console, response["result"])
        json.dump(response["result"], sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")

    if response["success"]:
        console.print(response["message"])
    else:
        logger.error(response["message"])
        console.print(f"[red]error[/red]: {response['message']}")
    return metadata["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
