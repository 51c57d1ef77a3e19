"""
Argument types shared by the subcommands.

Angles are radians and accept a fractional-pi shorthand:
  pi, -pi, 2pi, pi/2, 3pi/4, 3*pi/4, 0.25*pi/2
plus any finite float literal. Lists are comma-separated.
"""
from __future__ import annotations

import argparse
import math
import re
from typing import Any

from pydantic import BaseModel

_PI_PATTERN = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<coef>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?|\.\d+))?$"
)


def parse_angle(text: str) -> float:
    token = text.strip().lower()
    match = _PI_PATTERN.match(token)
    if match:
        coef = float(match.group("coef")) if match.group("coef") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0.0:
            raise argparse.ArgumentTypeError(f"invalid angle {text!r}: zero denominator")
        value = coef * math.pi / den
        return -value if match.group("sign") == "-" else value
    return parse_float(text)


def parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"non-finite number {text!r}")
    return value


def angle_list(text: str) -> list[float]:
    return [parse_angle(part) for part in _split(text)]


def float_list(text: str) -> list[float]:
    return [parse_float(part) for part in _split(text)]


def _split(text: str) -> list[str]:
    # An empty string is an empty list; models reject it where one is required.
    return [part for part in (p.strip() for p in text.split(",")) if part]


def add_output_args(parser: argparse.ArgumentParser, default_out: str) -> None:
    parser.add_argument(
        "--out",
        default=default_out,
        help="Output path prefix; relative prefixes resolve under BRACKETS_OUTPUT_DIR.",
    )


def request_fields(args: argparse.Namespace, model: type[BaseModel]) -> dict[str, Any]:
    """Namespace values for the model's fields; flags left unset fall back to model defaults."""
    values = vars(args)
    return {
        name: values[name]
        for name in model.model_fields
        if name in values and values[name] is not None
    }
