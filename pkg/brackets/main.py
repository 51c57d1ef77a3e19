"""
Command-line entry point.

    python -m brackets <subcommand> [options]

Subcommands: wigner, curves, sweep, retrieve, discriminate.
Exit codes: 0 ok, 1 unexpected failure, 2 validation, 3 I/O.
Failures print the `{code, message, details}` envelope as JSON on stderr.
"""
from __future__ import annotations

import argparse
import logging
from collections.abc import Sequence
from typing import Optional

from pydantic import ValidationError

from brackets import __version__
from brackets.commands import curves, discriminate, retrieve, sweep, wigner
from brackets.core.errors import (
    BracketError,
    bracket_error_handler,
    unhandled_error_handler,
    validation_error_handler,
)
from brackets.core.logging import configure_logging

logger = logging.getLogger("brackets")

COMMANDS = (wigner, curves, sweep, retrieve, discriminate)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        type=str.upper,
        help="Logging level (default BRACKETS_LOG_LEVEL or WARNING).",
    )
    shared.add_argument("--seed", type=int, help="Seed echoed into every sidecar; drives sweep randomness.")

    parser = argparse.ArgumentParser(
        prog="brackets",
        description="Bracket-state photon statistics, phase sweeps and receiver studies.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="<command>")
    for module in COMMANDS:
        module.register(subparsers, [shared])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except BracketError as exc:
        return bracket_error_handler(exc)
    except ValidationError as exc:
        return validation_error_handler(exc)
    except Exception as exc:  # noqa: BLE001
        logger.exception("unexpected failure in %s", args.command)
        return unhandled_error_handler(exc)
