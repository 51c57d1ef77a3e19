"""
Seeded Monte Carlo generator of shot-by-shot detector counts.

Optical chain per shot: signal amplitude -> LO displacement -> beam
splitter (tau) -> per-arm detector (eta1, eta2). Given the field amplitude
A of a shot, the two arm counts are independent Poisson draws with means
tau*eta1*|A|^2 and (1-tau)*eta2*|A|^2; correlations come only from
shot-to-shot fluctuations of |A|^2.

Randomness is counter-keyed: every block of settings.SHOT_CHUNK shots draws
from its own Philox stream keyed on (seed, stream, step, block). The
output is therefore identical for any worker count.

Public API
----------
sample_bracket_shot(spec, disp, split, rng)              -> (n1, n2)
sample_bracket_shots(spec, disp, split, n, seed, ...)    -> (n1[], n2[])
phase_profile(config)                                    -> ndarray
run_sweep(config, workers)                               -> SweepDataset
sample_fano(counts)                                      -> float
sample_correlation(pairs)                                -> float
batch_stderr(values, estimator, batches)                 -> (estimate, stderr)
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from brackets.core.config import settings
from brackets.core.errors import DegenerateInputError
from brackets.schemas.simshot import LinearProfile, PiezoProfile, SweepConfig, TableProfile
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import BracketSpec, Displacement

logger = logging.getLogger(__name__)

# Stream tags keep the sweep, direct-sampling and profile streams disjoint.
SWEEP_STREAM = 0
BRACKET_STREAM = 1
PROFILE_STREAM = 2


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShotRecord:
    step: int
    phi_true: float
    n1: int
    n2: int


@dataclass(frozen=True)
class SweepDataset:
    """Columnar shot records, grouped by ascending step."""
    config: SweepConfig
    step: NDArray[np.int64]
    phi_true: NDArray[np.float64]
    n1: NDArray[np.int64]
    n2: NDArray[np.int64]

    def __post_init__(self) -> None:
        for column in (self.step, self.phi_true, self.n1, self.n2):
            column.flags.writeable = False

    def __len__(self) -> int:
        return len(self.step)

    def records(self) -> Iterator[ShotRecord]:
        for s, p, a, b in zip(self.step, self.phi_true, self.n1, self.n2):
            yield ShotRecord(step=int(s), phi_true=float(p), n1=int(a), n2=int(b))

    def counts(self, arm: int) -> NDArray[np.int64]:
        return self.n1 if arm == 1 else self.n2

    @property
    def step_phases(self) -> NDArray[np.float64]:
        """True phase of each step (one value per step)."""
        per = self.config.shots_per_step
        return self.phi_true[::per]


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------

def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def _blocks(n: int) -> list[tuple[int, int]]:
    size = settings.SHOT_CHUNK
    return [(start, min(size, n - start)) for start in range(0, n, size)]


def _draw_counts(
    rng: np.random.Generator,
    intensity: NDArray[np.float64],
    t1: float,
    t2: float,
    noise: float,
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    if noise > 0.0:
        jitter = 1.0 + noise * rng.standard_normal(len(intensity))
        intensity = intensity * np.clip(jitter, 0.0, None)
    return rng.poisson(t1 * intensity), rng.poisson(t2 * intensity)


def _bracket_intensity(
    rng: np.random.Generator,
    spec: BracketSpec,
    disp: Displacement,
    n: int,
) -> NDArray[np.float64]:
    sign = 1.0 - 2.0 * rng.integers(0, 2, size=n)
    psi = rng.uniform(-0.5 * spec.gamma, 0.5 * spec.gamma, size=n)
    field = disp.amplitude + sign * spec.b * np.exp(1j * psi)
    return np.abs(field) ** 2


def _run_blocks(tasks: list, fn: Callable, workers: Optional[int]) -> list:
    workers = workers or settings.WORKERS
    if workers <= 1:
        return [fn(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# Direct bracket sampling
# ---------------------------------------------------------------------------

def sample_bracket_shot(
    spec: BracketSpec,
    disp: Displacement,
    split: SplitterSpec,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """One shot: sign k and psi drawn, then independent Poisson arm counts."""
    intensity = _bracket_intensity(rng, spec, disp, 1)
    n1, n2 = _draw_counts(rng, intensity, split.t1, split.t2, 0.0)
    return int(n1[0]), int(n2[0])


def sample_bracket_shots(
    spec: BracketSpec,
    disp: Displacement,
    split: SplitterSpec,
    n: int,
    seed: int,
    noise: float = 0.0,
    workers: Optional[int] = None,
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    def block(task: tuple[int, int]):
        start, size = task
        rng = _stream(seed, BRACKET_STREAM, start // settings.SHOT_CHUNK)
        return _draw_counts(rng, _bracket_intensity(rng, spec, disp, size), split.t1, split.t2, noise)

    parts = _run_blocks(_blocks(n), block, workers)
    if not parts:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return (
        np.concatenate([p[0] for p in parts]).astype(np.int64),
        np.concatenate([p[1] for p in parts]).astype(np.int64),
    )


# ---------------------------------------------------------------------------
# Phase sweep
# ---------------------------------------------------------------------------

def _quantize(values: NDArray[np.float64]) -> NDArray[np.float64]:
    # Rounded to the CSV precision so the text round-trip is bit-exact.
    digits = settings.CSV_DIGITS
    return np.array([float(f"{v:.{digits}g}") for v in values])


def phase_profile(config: SweepConfig) -> NDArray[np.float64]:
    """Unwrapped, monotone relative phase of each sweep step."""
    profile = config.phase_profile
    steps = config.steps
    if isinstance(profile, TableProfile):
        return np.asarray(profile.phases, dtype=float)
    if isinstance(profile, LinearProfile):
        return np.linspace(profile.start, profile.stop, steps)

    assert isinstance(profile, PiezoProfile)
    u = np.linspace(0.0, 1.0, steps)
    kappa = profile.distortion
    warped = u + kappa * u * (1.0 - u) * (1.0 - 2.0 * u)
    increments = 2.0 * math.pi * profile.fringes * np.diff(warped)
    if profile.jitter > 0.0:
        rng = _stream(config.seed, PROFILE_STREAM)
        factor = 1.0 + profile.jitter * rng.standard_normal(steps - 1)
        increments = increments * np.clip(factor, 0.05, None)
    return profile.start + np.concatenate(([0.0], np.cumsum(increments)))


def run_sweep(config: SweepConfig, workers: Optional[int] = None) -> SweepDataset:
    """
    Per step, a single coherent signal (gamma = 0, positive sign) interferes
    with the LO at the profile phase; counts per shot as in direct sampling.
    """
    phases = _quantize(phase_profile(config))
    per = config.shots_per_step
    b, mag = config.b, config.mag
    intensity = mag * mag + b * b + 2.0 * b * mag * np.cos(phases)
    t1 = config.tau * config.eta1
    t2 = (1.0 - config.tau) * config.eta2

    tasks = [(j, start, size) for j in range(config.steps) for start, size in _blocks(per)]

    def block(task: tuple[int, int, int]):
        j, start, size = task
        rng = _stream(config.seed, SWEEP_STREAM, j, start // settings.SHOT_CHUNK)
        return _draw_counts(rng, np.full(size, intensity[j]), t1, t2, config.noise)

    logger.info(
        "generating sweep: %d steps x %d shots (seed=%d)", config.steps, per, config.seed,
    )
    parts = _run_blocks(tasks, block, workers)
    return SweepDataset(
        config=config,
        step=np.repeat(np.arange(config.steps, dtype=np.int64), per),
        phi_true=np.repeat(phases, per),
        n1=np.concatenate([p[0] for p in parts]).astype(np.int64),
        n2=np.concatenate([p[1] for p in parts]).astype(np.int64),
    )


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------

def sample_fano(counts: ArrayLike) -> float:
    """Unbiased sample variance over sample mean."""
    values = np.asarray(counts, dtype=float)
    if values.size < 2:
        raise DegenerateInputError("Sample Fano factor needs at least two counts.", size=int(values.size))
    mean = float(values.mean())
    if mean == 0.0:
        raise DegenerateInputError("Sample Fano factor undefined for zero mean.")
    return float(values.var(ddof=1)) / mean


def sample_correlation(pairs: ArrayLike) -> float:
    """Pearson coefficient of (n1, n2) pairs."""
    data = np.asarray(pairs, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise DegenerateInputError("Correlation needs at least two (n1, n2) pairs.")
    a, b = data[:, 0], data[:, 1]
    sa, sb = float(a.std()), float(b.std())
    if sa == 0.0 or sb == 0.0:
        raise DegenerateInputError("Correlation undefined for a constant marginal.", std1=sa, std2=sb)
    return float(np.mean((a - a.mean()) * (b - b.mean()))) / (sa * sb)


def batch_stderr(
    values: ArrayLike,
    estimator: Callable[[NDArray], float],
    batches: int = 50,
) -> tuple[float, float]:
    """Estimate on the full sample plus its batch-means standard error."""
    data = np.asarray(values)
    if len(data) < 2 * batches:
        raise DegenerateInputError(
            "Too few samples for batch standard errors.", size=len(data), batches=batches,
        )
    per_batch = np.array([estimator(chunk) for chunk in np.array_split(data, batches)])
    return estimator(data), float(per_batch.std(ddof=1)) / math.sqrt(batches)
