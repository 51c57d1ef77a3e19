"""
Sweep dataset files.

  <prefix>.csv   header `step,phi_true,n1,n2`, one row per shot, grouped
                 by ascending step
  <prefix>.json  provenance sidecar; its `config` echoes the SweepConfig

Phases are quantized to the CSV precision when the sweep is generated,
so write -> read reproduces the dataset bit for bit.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from brackets.core.config import settings
from brackets.core.errors import DatasetFormatError, OutputError
from brackets.schemas.simshot import SweepConfig
from brackets.services import emit
from brackets.services.simshot import SweepDataset

logger = logging.getLogger(__name__)

HEADER = ("step", "phi_true", "n1", "n2")


def write_dataset(ds: SweepDataset, path: Union[str, Path]) -> Path:
    """Write the CSV and its sidecar; returns the CSV path."""
    csv_path = emit.with_ext(path, ".csv")
    table = np.column_stack((ds.step, ds.phi_true, ds.n1, ds.n2))
    fmt = ["%d", f"%.{settings.CSV_DIGITS}g", "%d", "%d"]
    emit.ensure_parent(csv_path)
    try:
        np.savetxt(csv_path, table, fmt=fmt, delimiter=",", header=",".join(HEADER), comments="")
    except OSError as exc:
        raise OutputError(path=str(csv_path), reason=exc.strerror or str(exc)) from exc
    config = ds.config.model_dump(mode="json")
    emit.write_json(
        emit.sidecar(csv_path),
        emit.provenance("sweep", config, ds.config.seed, records=len(ds)),
    )
    logger.info("wrote %d shot records to %s", len(ds), csv_path)
    return csv_path


def read_dataset(path: Union[str, Path]) -> SweepDataset:
    csv_path = Path(path)
    meta_path = emit.sidecar(csv_path)
    try:
        with csv_path.open(encoding="utf-8") as fh:
            header = fh.readline().strip()
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise OutputError(path=str(exc.filename), reason="no such file") from exc
    except OSError as exc:
        raise OutputError(path=str(csv_path), reason=exc.strerror or str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(path=str(meta_path), reason=f"sidecar is not JSON ({exc.msg})") from exc

    if tuple(header.split(",")) != HEADER:
        raise DatasetFormatError(path=str(csv_path), reason=f"expected header {','.join(HEADER)}")
    try:
        config = SweepConfig.model_validate(meta["config"])
    except (KeyError, TypeError, ValidationError) as exc:
        raise DatasetFormatError(path=str(meta_path), reason="sidecar lacks a valid sweep config") from exc

    try:
        table = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise DatasetFormatError(path=str(csv_path), reason=str(exc)) from exc

    expected = config.steps * config.shots_per_step
    if table.shape != (expected, 4):
        raise DatasetFormatError(
            path=str(csv_path),
            reason=f"expected {expected} rows of 4 columns, found shape {table.shape}",
        )
    step = table[:, 0].astype(np.int64)
    n1 = table[:, 2].astype(np.int64)
    n2 = table[:, 3].astype(np.int64)
    if np.any(np.diff(step) < 0) or step[0] < 0 or step[-1] >= config.steps:
        raise DatasetFormatError(path=str(csv_path), reason="rows are not grouped by ascending step")
    if np.any(n1 < 0) or np.any(n2 < 0):
        raise DatasetFormatError(path=str(csv_path), reason="negative counts")
    return SweepDataset(config=config, step=step, phi_true=table[:, 1].copy(), n1=n1, n2=n2)
