"""
CSV and JSON emission with provenance.

Every float goes out with settings.CSV_DIGITS significant digits, so
emitted files are byte-stable for fixed inputs. Every data file gets a
JSON sidecar carrying the package version, the seed and a SHA-256 hash
of the canonical request that produced it.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from brackets import __version__
from brackets.core.config import settings
from brackets.core.errors import OutputError

logger = logging.getLogger(__name__)


def fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{settings.CSV_DIGITS}g}"
    return str(value)


def _rounded(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    if isinstance(value, (float, np.floating)):
        return float(fmt(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def config_hash(config: Mapping[str, Any]) -> str:
    canonical = json.dumps(_rounded(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def provenance(command: str, config: Mapping[str, Any], seed: int, **extra: Any) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "command": command,
        "version": __version__,
        "seed": int(seed),
        "config_hash": config_hash(config),
        "config": _rounded(config),
    }
    payload.update(_rounded(extra))
    return payload


def resolve(out: str) -> Path:
    """Output prefix; relative prefixes land under settings.OUTPUT_DIR."""
    path = Path(out)
    return path if path.is_absolute() else Path(settings.OUTPUT_DIR) / path


def ensure_parent(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(path=str(path), reason=exc.strerror or str(exc)) from exc


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    ensure_parent(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OutputError(path=str(path), reason=exc.strerror or str(exc)) from exc
    logger.info("wrote %s", path)
    return path


def write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    ensure_parent(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            json.dump(_rounded(payload), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OutputError(path=str(path), reason=exc.strerror or str(exc)) from exc
    logger.info("wrote %s", path)
    return path


def sidecar(data_path: Path) -> Path:
    return data_path.with_suffix(".json")


def with_ext(prefix: Path | str, ext: str) -> Path:
    path = Path(prefix)
    return path if path.suffix == ext else path.with_name(path.name + ext)
