#!/usr/bin/env python3
"""greenstrip - batch front end.

    main.py run <scenario.ini> --out DIR [--grid nx,nt] [--override section.key=value ...]
    main.py selftest

Exit codes: 0 pass, 1 numerical failure, 2 I/O error, 3 invalid scenario.
"""

import argparse
import sys
from pathlib import Path

from config import VERSION
from runners import run_scenario
from runners.scenario import parse_scenario
from runners.selftest import run_selftest
from utils.errors import GreenStripError, ScenarioError
from utils.logger import logger

EXIT_PASS = 0
EXIT_NUMERICAL = 1
EXIT_IO = 2
EXIT_SCENARIO = 3


def _grid_overrides(text: str) -> list[str]:
    nx, sep, nt = text.partition(",")
    if not sep:
        raise ScenarioError("--grid", f"expected nx,nt, got {text!r}")
    return [f"grid.nx={nx.strip()}", f"grid.nt={nt.strip()}"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenstrip",
        description="Green-function solver for integro-differential equations on a strip",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one scenario file")
    run.add_argument("scenario", type=Path, help="scenario file (section.key = value lines)")
    run.add_argument("--out", type=Path, required=True, help="output directory")
    run.add_argument("--grid", help="output grid as nx,nt")
    run.add_argument(
        "--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="replace one scenario value (repeatable)",
    )

    commands.add_parser("selftest", help="run the quick acceptance checks")
    return parser


def run_command(args: argparse.Namespace) -> int:
    try:
        overrides = list(args.override)
        if args.grid:
            overrides += _grid_overrides(args.grid)
        scenario = parse_scenario(args.scenario, overrides)
        return run_scenario(scenario, args.out)
    except ScenarioError as err:
        logger.error(f"invalid scenario: {err}")
        return EXIT_SCENARIO
    except OSError as err:
        logger.error(f"I/O error: {err}")
        return EXIT_IO
    except GreenStripError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_NUMERICAL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return run_selftest()
    return run_command(args)


if __name__ == "__main__":
    sys.exit(main())
