"""Phase-sequence helpers shared by the fringe and CLI tests."""
from __future__ import annotations

import math

import numpy as np

MC_SEED = 1_234_567


def extremum_steps(phases: np.ndarray) -> np.ndarray:
    """Steps nearest to each crossing of a multiple of pi by an increasing phase sequence."""
    turns = np.floor(np.asarray(phases) / math.pi)
    crossings = np.flatnonzero(np.diff(turns) != 0)
    out = []
    for j in crossings:
        target = math.pi * turns[j + 1]
        out.append(j if abs(phases[j] - target) < abs(phases[j + 1] - target) else j + 1)
    return np.asarray(out, dtype=int)


def away_from_extrema(phases: np.ndarray, margin: int = 3) -> np.ndarray:
    mask = np.ones(len(phases), dtype=bool)
    for j in extremum_steps(phases):
        mask[max(0, j - margin): j + margin + 1] = False
    return mask


def circular_error(estimate: np.ndarray, truth: np.ndarray) -> np.ndarray:
    return np.angle(np.exp(1j * (np.asarray(estimate) - np.asarray(truth))))
