"""
Coherent backscattering from oriented 85Rb - command-line entry point

Usage:
    python main.py spectrum --config configs/rb85_sigma_only.json [--seed N] [--threads N] [--out DIR]
    python main.py beatspec --config configs/beatspec.json
    python main.py oracles
    python main.py quadrature-check --config configs/rb85_sigma_only.json
"""

from dotenv import load_dotenv

# Environment (.env) must be loaded before the package reads CBS_ANTILOC_* settings.
load_dotenv()

import argparse  # noqa: E402
import sys  # noqa: E402
from typing import Dict, List, Optional, Type  # noqa: E402

from src.commands.beatspec_command import BeatspecCommand  # noqa: E402
from src.commands.command import Command  # noqa: E402
from src.commands.oracles_command import OraclesCommand  # noqa: E402
from src.commands.quadrature_command import QuadratureCommand  # noqa: E402
from src.commands.spectrum_command import SpectrumCommand  # noqa: E402
from src.models.errors import ConfigError, InvariantViolation  # noqa: E402

COMMANDS: Dict[str, Type[Command]] = {
    "spectrum": SpectrumCommand,
    "beatspec": BeatspecCommand,
    "oracles": OraclesCommand,
    "quadrature-check": QuadratureCommand,
}

EXIT_CONFIG_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbs-antiloc",
        description="Monte-Carlo coherent backscattering from a spin-oriented 85Rb gas.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", help="JSON run configuration")
        sub.add_argument("--seed", type=int, help="overrides the seed of the configuration")
        sub.add_argument("--threads", type=int, help="worker threads, 0 = all cores")
        sub.add_argument("--out", help="directory receiving the output files")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    command = COMMANDS[args.command](args)
    try:
        return command.act()
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
