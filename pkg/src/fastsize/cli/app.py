"""Argument parsing, logging setup and exit-code mapping."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from enum import IntEnum
from pathlib import Path
from typing import NoReturn

from .. import __version__
from ..exceptions import (
    FastSizeError,
    InfeasibleDecompositionError,
    MissionError,
    NonConvergenceError,
)
from ..geometry import FORMATS
from ..mission import DEFAULT_DT_MAX
from ..regression import MODES
from .commands import cmd_fly, cmd_plot, cmd_predict, cmd_size, cmd_viz

logger = logging.getLogger("fastsize")


class ExitCode(IntEnum):
    """Process exit codes."""

    OK = 0
    INPUT = 1
    NON_CONVERGENCE = 2
    INFEASIBLE = 3


def exit_code_for(error: BaseException) -> ExitCode:
    """Exit code of a failure.

    Non-convergence and divergence give 2, an unflyable mission or an
    infeasible weight decomposition gives 3, everything else 1.
    """
    if isinstance(error, NonConvergenceError):
        return ExitCode.NON_CONVERGENCE
    if isinstance(error, MissionError | InfeasibleDecompositionError):
        return ExitCode.INFEASIBLE
    return ExitCode.INPUT


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        msg = f"{self.prog}: {message}"
        raise UsageError(msg)


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="what to print on stdout: text report or JSON (default: text)",
    )


def _add_db(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--db",
        type=Path,
        default=None,
        help="historical database directory or CSV (default: $FASTSIZE_DB or the bundled one)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the ``fastsize`` argument parser."""
    parser = _Parser(
        prog="fastsize",
        description="Size aircraft with any propulsion architecture and fly their missions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress on stderr (-v info, -vv debug)",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    size = commands.add_parser("size", help="size an aircraft for its design mission")
    size.add_argument("aircraft", type=Path, help="aircraft specification (TOML)")
    size.add_argument("mission", type=Path, help="mission profile (TOML)")
    size.add_argument("arch", type=Path, help="propulsion architecture (TOML)")
    size.add_argument("--out-dir", type=Path, default=Path(), help="output directory")
    size.add_argument("--tolerance", type=float, default=1e-6, help="relative MTOW tolerance")
    size.add_argument("--max-iter", type=int, default=100, help="iteration budget")
    size.add_argument("--relaxation", type=float, default=1.0, help="relaxation factor in (0, 1]")
    size.add_argument("--initial-mtow", type=float, default=None, help="seed MTOW, kg")
    size.add_argument(
        "--dt-max", type=float, default=DEFAULT_DT_MAX, help="longest integration step, s"
    )
    _add_db(size)
    _add_format(size)
    size.set_defaults(handler=cmd_size)

    fly = commands.add_parser("fly", help="fly an aircraft with fixed masses")
    fly.add_argument("mission", type=Path, help="mission profile (TOML)")
    source = fly.add_mutually_exclusive_group(required=True)
    source.add_argument("--aircraft", type=Path, help="aircraft specification with [weights]")
    source.add_argument("--sized", type=Path, help="sized aircraft report (sized.json)")
    fly.add_argument("--arch", type=Path, default=None, help="propulsion architecture (TOML)")
    fly.add_argument("--out-dir", type=Path, default=Path(), help="output directory")
    fly.add_argument(
        "--dt-max", type=float, default=DEFAULT_DT_MAX, help="longest integration step, s"
    )
    _add_db(fly)
    _add_format(fly)
    fly.set_defaults(handler=cmd_fly)

    pred = commands.add_parser("predict", help="query a historical regression")
    pred.add_argument("output", help="database column to predict")
    pred.add_argument(
        "--at",
        action="append",
        default=[],
        metavar="COLUMN=VALUE",
        help="input column and value (repeatable)",
    )
    pred.add_argument("--mode", choices=MODES, default="gaussian_process")
    pred.add_argument("--type", default=None, help="only use rows of this type")
    pred.add_argument("--out-dir", type=Path, default=Path(), help="output directory")
    _add_db(pred)
    _add_format(pred)
    pred.set_defaults(handler=cmd_predict)

    plot = commands.add_parser("plot", help="plot a mission history CSV as SVG")
    plot.add_argument("history", type=Path, help="history CSV")
    plot.add_argument("out", type=Path, help="output SVG")
    plot.add_argument("--title", default=None, help="figure title")
    plot.set_defaults(handler=cmd_plot)

    viz = commands.add_parser("viz", help="draw the wireframe of a sized aircraft")
    viz.add_argument("sized", type=Path, help="sized aircraft report (sized.json)")
    viz.add_argument("template", type=Path, help="geometry template (TOML)")
    viz.add_argument("out", type=Path, help="output file (.svg or .obj)")
    viz.add_argument(
        "--format",
        dest="export_format",
        choices=FORMATS,
        default=None,
        help="export format (default: from the output suffix)",
    )
    _add_db(viz)
    viz.set_defaults(handler=cmd_viz)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the ``fastsize`` command line.

    Args:
        argv: Arguments without the program name; ``sys.argv[1:]`` when None.

    Returns:
        Exit code: 0 success, 1 input/validation/regression/geometry error,
        2 non-convergence or divergence, 3 mission or weight infeasibility.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return ExitCode.INPUT
    except SystemExit as e:
        # --help and --version
        return ExitCode.OK if e.code in (0, None) else ExitCode.INPUT

    _configure_logging(args.verbose)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except FastSizeError as e:
        code = exit_code_for(e)
        sys.stderr.write(f"error: {e}\n")
        logger.debug("%s failed", args.command, exc_info=True)
        return code
    except Exception as e:
        sys.stderr.write(f"error: unexpected failure: {e}\n")
        logger.debug("%s failed", args.command, exc_info=True)
        return ExitCode.INPUT
