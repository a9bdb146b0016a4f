#!/usr/bin/env python3
"""
Heinz Constants - sharp constants for harmonic maps of the unit ball
"""

import argparse
import logging
import sys

from src.app import EXIT_BAD_ARGUMENTS, App
from src.cli.config import VerifyTarget, config_from_args
from src.errors import ConfigError

class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that exits with the bad-arguments code."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_ARGUMENTS, f"{self.prog}: error: {message}\n")

def setup_logging(log_level: str = "WARNING") -> None:
    """Setup logging configuration.

    Output goes to stderr; stdout carries the tables and reports.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
    """
    level = getattr(logging, log_level.upper(), logging.INFO)

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True
    )

def _add_common(parser: argparse.ArgumentParser, default_n: str) -> None:
    parser.add_argument("--n", default=default_n,
                        help="Dimensions: 2, 2,5,7 or 2..8")
    parser.add_argument("--tol", type=float, default=1e-12,
                        help="Absolute tolerance (at least 1e-13)")
    parser.add_argument("--output", default=None,
                        help="Write output to this path instead of stdout")
    parser.add_argument("--format", choices=["table", "csv", "json"], default=None,
                        help="Output format")

def build_parser() -> ArgumentParser:
    parser = ArgumentParser(description="Heinz Constants - sharp constants for harmonic maps of the unit ball")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    constants = commands.add_parser("constants", help="Table of C_n")
    _add_common(constants, "2..4")

    profile = commands.add_parser("profile", help="Tabulate U(rN) or V(r)")
    _add_common(profile, "2")
    profile.add_argument("--which", choices=["U", "V"], default="U",
                         help="Profile to tabulate")
    profile.add_argument("--grid", default="0:0.1:0.9",
                         help="Radii as start:step:stop or a single value")

    verify = commands.add_parser("verify", help="Check an inequality or identity numerically")
    verify.add_argument("target", choices=[t.value for t in VerifyTarget],
                        help="What to verify")
    _add_common(verify, "2..4")
    verify.add_argument("--seed", type=int, default=7, help="Sampling seed")
    verify.add_argument("--samples", type=int, default=200_000,
                        help="Monte Carlo samples per evaluation")
    verify.add_argument("--maps", type=int, default=20,
                        help="Random boundary maps per dimension")
    verify.add_argument("--grid", default=None, help="Radii as start:step:stop")
    verify.add_argument("--r", default=None, help="Comma list of radii")
    verify.add_argument("--radii", default=None,
                        help="Comma list of |x| for the Monte Carlo checks")
    verify.add_argument("--m", default=None, help="Comma list of sharpness indices m")
    verify.add_argument("--k-max", type=int, default=50,
                        help="Last coefficient index for the split identity")
    verify.add_argument("--literal", action="store_true",
                        help="Use the discontinuous variant of h_m")
    return parser

def main(argv=None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logging
    setup_logging(args.log_level)

    try:
        config = config_from_args(args)
    except ConfigError as e:
        logging.getLogger("HeinzConstants").error(f"Invalid arguments: {e}")
        return EXIT_BAD_ARGUMENTS

    app = App(config)
    return app.run()

if __name__ == "__main__":
    sys.exit(main())
