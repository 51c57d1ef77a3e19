"""
sweep: simulate a piezo phase sweep and store the shot records.
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from brackets.commands.common import add_output_args, request_fields
from brackets.core.errors import EXIT_OK, DomainError, OutputError
from brackets.schemas.run import SweepRequest
from brackets.schemas.simshot import SweepConfig
from brackets.services import emit, simshot, storage


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "sweep",
        parents=parents,
        allow_abbrev=False,
        help="Simulate a phase sweep",
        description=(
            "Generate shot-by-shot counts of a stepped phase sweep. The optional JSON "
            "config holds SweepConfig fields; --seed overrides its seed."
        ),
    )
    parser.add_argument("--config", help="JSON file with sweep parameters (defaults when omitted).")
    parser.add_argument("--workers", type=int, help="Worker threads; output does not depend on it.")
    add_output_args(parser, "sweep")
    parser.set_defaults(func=run)


def load_config(path: str | None, seed: int | None) -> SweepConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise OutputError(path=path, reason=exc.strerror or str(exc)) from exc
        except json.JSONDecodeError as exc:
            raise DomainError(field="config", bound="valid JSON object", value=exc.msg) from exc
        if not isinstance(raw, dict):
            raise DomainError(field="config", bound="valid JSON object", value=type(raw).__name__)
    if seed is not None:
        raw = {**raw, "seed": seed}
    return SweepConfig.model_validate(raw)


def run(args: argparse.Namespace) -> int:
    req = SweepRequest.model_validate(request_fields(args, SweepRequest))
    config = load_config(req.config, req.seed)
    ds = simshot.run_sweep(config, workers=req.workers)
    storage.write_dataset(ds, emit.resolve(req.out))
    return EXIT_OK
