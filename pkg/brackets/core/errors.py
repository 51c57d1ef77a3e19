"""
Custom exception hierarchy for brackets.

Rule: every error has a machine-readable `code` string and a process
`exit_code`, so scripts driving the CLI can branch on either without
parsing English messages.
"""
from __future__ import annotations

import json
import sys
from typing import Any, Optional, TextIO

from pydantic import ValidationError

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


# ---------------------------------------------------------------------------
# Exception classes
# ---------------------------------------------------------------------------

class BracketError(Exception):
    """Base class for all application-level errors."""
    exit_code: int = EXIT_UNEXPECTED
    code: str = "INTERNAL_ERROR"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> dict:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class DomainError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "DOMAIN_ERROR"

    def __init__(
        self,
        field: str,
        bound: str,
        value: Any = None,
        errors: Optional[list[dict]] = None,
    ):
        details: dict[str, Any] = {"field": field, "bound": bound}
        if value is not None:
            details["value"] = value
        if errors:
            details["errors"] = errors
        super().__init__(
            message=f"{field} violates {bound} (got {value!r}).",
            details=details,
        )


class DegenerateInputError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "DEGENERATE_INPUT"

    def __init__(self, message: str, **details: Any):
        super().__init__(message=message, details=details)


class FlatFringeError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "FLAT_FRINGE"

    def __init__(self, spread: float, noise: float):
        super().__init__(
            message=(
                f"Fringe envelope spread {spread:.6g} is below 10x the shot-noise "
                f"level {noise:.6g}; the data carry no phase information."
            ),
            details={"spread": spread, "noise": noise},
        )


class BranchAmbiguityError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "BRANCH_AMBIGUITY"

    def __init__(self, steps: list[int], reason: str):
        super().__init__(
            message=f"Cannot assign arccos branches: {reason}.",
            details={"extrema_steps": steps},
        )


class EmptyWindowError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "EMPTY_WINDOW"

    def __init__(self, center: float, gamma: float, low: float, high: float):
        super().__init__(
            message=(
                f"No sweep step has a retrieved phase in [{low:.6g}, {high:.6g}] "
                f"(center={center:.6g}, gamma={gamma:.6g})."
            ),
            details={"center": center, "gamma": gamma, "window": [low, high]},
        )


class DatasetFormatError(BracketError):
    exit_code = EXIT_VALIDATION
    code = "DATASET_FORMAT"

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Malformed dataset {path}: {reason}.",
            details={"path": path},
        )


class OutputError(BracketError):
    exit_code = EXIT_IO
    code = "IO_ERROR"

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Cannot access {path}: {reason}.",
            details={"path": path},
        )


# ---------------------------------------------------------------------------
# pydantic bridge
# ---------------------------------------------------------------------------

def field_errors(exc: ValidationError) -> list[dict]:
    """Machine-readable field errors, one per pydantic error."""
    return [
        {
            "field": ".".join(str(loc) for loc in error["loc"]),
            "message": error["msg"],
            "type": error["type"],
        }
        for error in exc.errors()
    ]


def validation_error_to_domain(exc: ValidationError) -> DomainError:
    """Collapse a pydantic ValidationError into a DomainError naming the first bad field."""
    errors = field_errors(exc)
    first = exc.errors()[0]
    ctx = first.get("ctx") or {}
    bound = ", ".join(f"{k} {v}" for k, v in ctx.items()) or first["msg"]
    return DomainError(
        field=errors[0]["field"] or "input",
        bound=bound,
        value=first.get("input") if _is_scalar(first.get("input")) else None,
        errors=errors,
    )


def _is_scalar(value: Any) -> bool:
    return isinstance(value, (int, float, str, bool))


# ---------------------------------------------------------------------------
# CLI exception handlers: write the envelope to stderr, return the exit code
# ---------------------------------------------------------------------------

def _emit(payload: dict, stream: Optional[TextIO]) -> None:
    print(json.dumps(payload, sort_keys=True, default=str), file=stream or sys.stderr)


def bracket_error_handler(exc: BracketError, stream: Optional[TextIO] = None) -> int:
    _emit(exc.to_dict(), stream)
    return exc.exit_code


def validation_error_handler(exc: ValidationError, stream: Optional[TextIO] = None) -> int:
    return bracket_error_handler(validation_error_to_domain(exc), stream)


def unhandled_error_handler(exc: Exception, stream: Optional[TextIO] = None) -> int:
    _emit({"code": "INTERNAL_ERROR", "message": "An unexpected error occurred."}, stream)
    return EXIT_UNEXPECTED
