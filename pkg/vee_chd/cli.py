#!/usr/bin/env python3
"""
vee-chd command line

Subcommands:
- list:   show the figure presets
- run:    evaluate a preset or a key=value scenario file, optionally overriding keys
- sweep:  like run, with the sweep given inline on the command line
- verify: run the identity suite and report residuals per check

Exit codes: 0 success, 1 invalid input, 2 computation error, 3 verification failure.
"""

import argparse
import asyncio
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

import aiofiles
from pydantic import ValidationError

from vee_chd import __version__
from vee_chd.errors import ScenarioError, VeeChdError
from vee_chd.scenarios import (
    CONFIG_KEYS,
    PRESETS,
    SWEEP_KEYS,
    OutputTable,
    Scenario,
    apply_overrides,
    get_preset,
    load_scenario_file,
    run_scenario_async,
)
from vee_chd.verification import DEFAULT_SEED, verify_all

logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "VEE_CHD_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTATION = 2
EXIT_VERIFICATION = 3


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the invalid-input code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output-dir",
        type=Path,
        help="Directory for <scenario>.csv (default: write the table to stdout)",
    )
    parser.add_argument(
        "--timestamp",
        action="store_true",
        help="Add a generation timestamp to the provenance header",
    )


def _add_scenario_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", help="Preset name (see 'list') or path to a key=value file")
    overrides = parser.add_argument_group("scenario keys", "override values of the scenario")
    for key in CONFIG_KEYS:
        overrides.add_argument(f"--{key.replace('_', '-')}", dest=key, metavar="VALUE")
    parser.add_argument("--workers", type=int, help="Worker tasks for sweeps and curves")
    _add_output_options(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vee-chd",
        description="Resonance fluorescence of a bichromatically driven V-type three-level atom",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Intensity correlations of both transitions, strong drive
  vee-chd run fig2b --output-dir out

  # The same preset with a different weak-transition Rabi frequency
  vee-chd run fig2b --omega-w 0.2

  # Variance of the weak transition against Omega_s
  vee-chd sweep fig8b --sweep-param omega_s --sweep-min 0.05 --sweep-max 1 --sweep-steps 40

  # Identity suite
  vee-chd verify
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=os.environ.get(LOG_LEVEL_ENV, "WARNING"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "debug", "info", "warning", "error"],
        help=f"Logging verbosity (default: ${LOG_LEVEL_ENV} or WARNING)",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    commands.add_parser("list", help="List the figure presets")

    run = commands.add_parser("run", help="Evaluate a scenario")
    _add_scenario_options(run)

    sweep = commands.add_parser("sweep", help="Evaluate a scenario along an inline sweep")
    _add_scenario_options(sweep)

    verify = commands.add_parser("verify", help="Run the identity suite")
    verify.add_argument("--random-sets", type=int, default=20, help="Random parameter sets")
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Random seed")
    _add_output_options(verify)
    return parser


def resolve_scenario(reference: str, overrides: Dict[str, Optional[str]]) -> Scenario:
    """Preset or scenario file, with command-line keys applied on top."""
    if reference in PRESETS:
        scenario = get_preset(reference)
    elif Path(reference).is_file():
        scenario = load_scenario_file(reference)
    else:
        raise ScenarioError(
            f"neither a preset ({', '.join(PRESETS)}) nor a readable file", reference
        )
    if any(value is not None for value in overrides.values()):
        scenario = apply_overrides(scenario, overrides)
    return scenario


async def write_table(table: OutputTable, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, "w", encoding="utf-8") as handle:
        await handle.write(table.render())
    logger.info("wrote %s", path)
    return path


async def _emit(table: OutputTable, name: str, output_dir: Optional[Path]) -> None:
    if output_dir is None:
        sys.stdout.write(table.render())
    else:
        await write_table(table, output_dir / f"{name}.csv")


async def _run_command(args: argparse.Namespace) -> int:
    overrides = {key: getattr(args, key) for key in CONFIG_KEYS}
    if args.command == "sweep":
        missing = [key for key in SWEEP_KEYS if overrides[key] is None]
        if missing:
            flags = ", ".join(f"--{key.replace('_', '-')}" for key in missing)
            raise ScenarioError(f"sweep needs {flags}", args.scenario)
    scenario = resolve_scenario(args.scenario, overrides)
    table = await run_scenario_async(scenario, workers=args.workers, timestamp=args.timestamp)
    await _emit(table, scenario.name, args.output_dir)
    return EXIT_OK


async def _verify_command(args: argparse.Namespace) -> int:
    loop = asyncio.get_running_loop()
    report = await loop.run_in_executor(
        None, lambda: verify_all(random_sets=args.random_sets, seed=args.seed)
    )
    provenance = [("suite", "identities"), ("version", f"vee-chd {__version__}")]
    provenance.append(("random_sets", str(args.random_sets)))
    provenance.append(("seed", str(args.seed)))
    await _emit(report.to_table(tuple(provenance)), "verify", args.output_dir)
    for failure in report.failures():
        print(f"FAILED {failure.name}: residual {failure.residual:.3e} > {failure.tolerance:.1e}"
              + (f" ({failure.detail})" if failure.detail else ""), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def _list_command() -> int:
    width = max(len(name) for name in PRESETS)
    for name, scenario in PRESETS.items():
        print(f"{name.ljust(width)}  {scenario.observable.value:<18} {scenario.description}")
    return EXIT_OK


def _describe(exc: VeeChdError) -> str:
    if exc.scenario and not isinstance(exc, ScenarioError):
        return f"[{exc.scenario}] {exc}"
    return str(exc)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        if args.command == "list":
            return _list_command()
        if args.command == "verify":
            return asyncio.run(_verify_command(args))
        return asyncio.run(_run_command(args))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VeeChdError as exc:
        print(f"computation failed: {_describe(exc)}", file=sys.stderr)
        return EXIT_COMPUTATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
