"""
Phase determination from swept interference fringes, and post-selected
assembly of bracket ensembles.

Pipeline
--------
  fringe_means   per-step mean counts of one arm
  fit_cosine     offset A and amplitude B of m_j = A + B cos(phi_j)
  normalize      v_j = clamp((m_j - A) / B, -1, 1)
  retrieve_phases  arccos of v_j with branches chosen between fringe extrema

Branch convention: the sweep phase is taken to increase with the step
index. Between a v-maximum and the next v-minimum phi runs over (0, pi)
(phi = arccos v); between a minimum and the next maximum it runs over
(pi, 2 pi) (phi = 2 pi - arccos v). A decreasing sweep is recovered as
its mirror image -phi, which carries the same cos(phi) and cos(2 phi).

Public API
----------
fringe_means(ds, arm)                     -> ndarray
fringe_stderr(ds, arm)                    -> ndarray
fit_cosine(means, stderr)                 -> FringeFit (phases empty)
normalize(means, fit)                     -> (v, clamped)
retrieve_phases(means, fit)               -> ndarray in [0, 2 pi)
determine_phases(ds, arm)                 -> FringeFit (phases filled)
post_select(ds, phases, center, gamma)    -> BracketEnsemble
ensemble_stats(e)                         -> EnsembleStats
"""
from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev
from numpy.typing import ArrayLike, NDArray
from scipy import ndimage, optimize, signal

from brackets.core.config import settings
from brackets.core.errors import (
    BranchAmbiguityError,
    DegenerateInputError,
    DomainError,
    EmptyWindowError,
    FlatFringeError,
)
from brackets.services import photostat, simshot
from brackets.services.photostat import PhotonDistribution
from brackets.services.simshot import SweepDataset

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MIN_FRINGE_STEPS = 8
MIN_EXTREMUM_SPACING = 4
MAX_FIT_ITERATIONS = 10
FIT_RTOL = 1e-9
# Points this close to the turning points are left out of the phase-model seed.
SEED_LEVEL = 0.95


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FringeFit:
    offset: float
    amplitude: float
    per_step_phase: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    clamped: int = 0
    iterations: int = 0


@dataclass(frozen=True)
class StepWeight:
    """Inclusion record of one sweep step in one post-selection window."""
    step: int
    window: int  # 0 = around center, 1 = around center + pi
    offset: float
    weight: float
    drawn: int


@dataclass(frozen=True)
class BracketEnsemble:
    center_phase: float
    gamma: float
    pooled: NDArray[np.int64]  # shape (n, 2): arm-1 and arm-2 counts
    pooled_steps: NDArray[np.int64]
    weights: tuple[StepWeight, ...]

    def __len__(self) -> int:
        return len(self.pooled)


@dataclass(frozen=True)
class EnsembleStats:
    fano1: float
    fano2: float
    gamma_corr: float
    histogram1: PhotonDistribution
    histogram2: PhotonDistribution
    fano1_err: float = math.nan
    fano2_err: float = math.nan
    gamma_corr_err: float = math.nan


# ---------------------------------------------------------------------------
# Per-step fringe
# ---------------------------------------------------------------------------

def _step_sums(ds: SweepDataset, arm: int) -> tuple[NDArray, NDArray, NDArray]:
    if len(ds) == 0:
        raise DegenerateInputError("Sweep dataset is empty.")
    if arm not in (1, 2):
        raise DomainError(field="arm", bound="arm in {1, 2}", value=arm)
    steps = ds.config.steps
    counts = ds.counts(arm).astype(float)
    n = np.bincount(ds.step, minlength=steps).astype(float)
    if np.any(n == 0):
        empty = [int(j) for j in np.flatnonzero(n == 0)]
        raise DegenerateInputError("Sweep steps without shots.", steps=empty[:10])
    s1 = np.bincount(ds.step, weights=counts, minlength=steps)
    s2 = np.bincount(ds.step, weights=counts * counts, minlength=steps)
    return n, s1, s2


def fringe_means(ds: SweepDataset, arm: int = 1) -> NDArray[np.float64]:
    n, s1, _ = _step_sums(ds, arm)
    return s1 / n


def fringe_stderr(ds: SweepDataset, arm: int = 1) -> NDArray[np.float64]:
    """Standard error of each step mean; NaN for single-shot steps."""
    n, s1, s2 = _step_sums(ds, arm)
    mean = s1 / n
    with np.errstate(invalid="ignore", divide="ignore"):
        var = np.clip(s2 - n * mean * mean, 0.0, None) / (n - 1.0)
        return np.where(n > 1, np.sqrt(var / n), np.nan)


# ---------------------------------------------------------------------------
# Normalization and branch assignment
# ---------------------------------------------------------------------------

def normalize(means: ArrayLike, fit: FringeFit) -> tuple[NDArray[np.float64], int]:
    v = (np.asarray(means, dtype=float) - fit.offset) / fit.amplitude
    clamped = int(np.count_nonzero(np.abs(v) > 1.0))
    return np.clip(v, -1.0, 1.0), clamped


def _extrema(v: NDArray[np.float64]) -> list[tuple[int, int]]:
    """(step, kind) of fringe extrema; kind +1 for a maximum of v, -1 for a minimum."""
    smooth = ndimage.uniform_filter1d(v, size=settings.SMOOTHING_WINDOW, mode="nearest")
    level = settings.EXTREMUM_LEVEL
    maxima, _ = signal.find_peaks(smooth, height=level)
    minima, _ = signal.find_peaks(-smooth, height=level)

    # Noise ripples on a turning point give runs of same-kind candidates; keep the most extreme.
    merged: list[tuple[int, int]] = []
    for idx, kind in sorted([(int(i), 1) for i in maxima] + [(int(i), -1) for i in minima]):
        if merged and merged[-1][1] == kind:
            if kind * smooth[idx] > kind * smooth[merged[-1][0]]:
                merged[-1] = (idx, kind)
            continue
        merged.append((idx, kind))

    half = max(1, settings.SMOOTHING_WINDOW // 2)
    found: list[tuple[int, int]] = []
    for idx, kind in merged:
        lo, hi = max(0, idx - half), min(len(v), idx + half + 1)
        window = v[lo:hi]
        found.append((lo + int(np.argmax(window) if kind > 0 else np.argmin(window)), kind))

    steps = [s for s, _ in found]
    for (s0, _), (s1, _) in zip(found, found[1:]):
        if s1 - s0 < MIN_EXTREMUM_SPACING:
            raise BranchAmbiguityError(
                steps, f"extrema at steps {s0} and {s1} closer than {MIN_EXTREMUM_SPACING} steps",
            )
    return found


def _unwrapped_phases(v: NDArray[np.float64]) -> NDArray[np.float64]:
    raw = np.arccos(v)
    n = len(v)
    extrema = _extrema(v)
    bounds = np.array([s for s, _ in extrema], dtype=np.int64)
    kinds = [k for _, k in extrema]

    # Segment s ends at extremum s; it descends into a minimum, ascends into a maximum.
    if kinds:
        rising = [k > 0 for k in kinds] + [kinds[-1] < 0]
    else:
        smooth = ndimage.uniform_filter1d(v, size=settings.SMOOTHING_WINDOW, mode="nearest")
        rising = [bool(smooth[-1] > smooth[0])]
    turns = np.concatenate(([0], np.cumsum([k > 0 for k in kinds]))).astype(float)

    segment = np.searchsorted(bounds, np.arange(n), side="left")
    up = np.asarray(rising)[segment]
    base = TWO_PI * turns[segment]
    phases = base + np.where(up, TWO_PI - raw, raw)

    # An extremum step takes whichever branch sits closest to its neighbours.
    for s, (j, _) in enumerate(extrema):
        right_base = TWO_PI * turns[s + 1]
        candidates = (phases[j], right_base + (TWO_PI - raw[j] if rising[s + 1] else raw[j]))
        neighbours = [phases[k] for k in (j - 1, j + 1) if 0 <= k < n]
        target = float(np.mean(neighbours))
        phases[j] = min(candidates, key=lambda c: abs(c - target))
    return phases


def retrieve_phases(means: ArrayLike, fit: FringeFit) -> NDArray[np.float64]:
    v, clamped = normalize(means, fit)
    if clamped > 0.05 * len(v):
        logger.warning("%d of %d fringe points clamped to [-1, 1]", clamped, len(v))
    else:
        logger.info("%d of %d fringe points clamped", clamped, len(v))
    return np.mod(_unwrapped_phases(v), TWO_PI)


# ---------------------------------------------------------------------------
# Cosine fit
# ---------------------------------------------------------------------------

def _noise_floor(means: NDArray[np.float64], stderr: Optional[ArrayLike]) -> float:
    if stderr is not None:
        errs = np.asarray(stderr, dtype=float)
        if np.any(np.isfinite(errs)):
            return float(np.nanmedian(errs))
    # Second differences of a smooth fringe are small; their spread tracks the noise.
    second = np.diff(means, n=2)
    return float(np.median(np.abs(second - np.median(second)))) / (0.6745 * math.sqrt(6.0))


def _refine(
    means: NDArray[np.float64],
    u: NDArray[np.float64],
    offset: float,
    amplitude: float,
    seed_phases: NDArray[np.float64],
    mask: NDArray[np.bool_],
) -> tuple[float, float]:
    degree = settings.FRINGE_PHASE_DEGREE
    coeffs = chebyshev.chebfit(u[mask], seed_phases[mask], degree)
    basis = chebyshev.chebvander(u, degree)

    def residual(p: NDArray[np.float64]) -> NDArray[np.float64]:
        return p[0] + p[1] * np.cos(basis @ p[2:]) - means

    def jacobian(p: NDArray[np.float64]) -> NDArray[np.float64]:
        theta = basis @ p[2:]
        jac = np.empty((len(means), len(p)))
        jac[:, 0] = 1.0
        jac[:, 1] = np.cos(theta)
        jac[:, 2:] = -p[1] * np.sin(theta)[:, None] * basis
        return jac

    start = np.concatenate(([offset, amplitude], coeffs))
    result = optimize.least_squares(
        residual, start, jac=jacobian, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200,
    )
    return float(result.x[0]), abs(float(result.x[1]))


def fit_cosine(means: ArrayLike, stderr: Optional[ArrayLike] = None) -> FringeFit:
    """
    Offset and amplitude of the fringe.

    Seeded from the 5th/95th percentile envelope, then refined by least
    squares of the means against A + B cos(theta(u)) where theta is a
    smooth Chebyshev phase model seeded from the retrieved phases. The
    retrieval and the refinement alternate until (A, B) settle.
    """
    m = np.asarray(means, dtype=float)
    if m.size < MIN_FRINGE_STEPS:
        raise DomainError(field="means", bound=f"len(means) >= {MIN_FRINGE_STEPS}", value=int(m.size))

    low, high = np.percentile(m, [5.0, 95.0])
    spread = float(high - low)
    noise = _noise_floor(m, stderr)
    if spread <= 10.0 * noise or spread <= 1e-12 * max(1.0, abs(float(high))):
        raise FlatFringeError(spread=spread, noise=noise)

    offset, amplitude = 0.5 * (high + low), 0.5 * spread
    u = np.linspace(-1.0, 1.0, m.size)
    iterations = 0
    for iterations in range(1, MAX_FIT_ITERATIONS + 1):
        trial = FringeFit(offset=offset, amplitude=amplitude)
        v, _ = normalize(m, trial)
        seed_phases = _unwrapped_phases(v)
        mask = np.abs(v) < SEED_LEVEL
        if np.count_nonzero(mask) <= settings.FRINGE_PHASE_DEGREE:
            mask = np.ones_like(mask)
        new_offset, new_amplitude = _refine(m, u, offset, amplitude, seed_phases, mask)
        change = max(abs(new_offset - offset), abs(new_amplitude - amplitude)) / max(
            abs(new_offset), abs(new_amplitude)
        )
        offset, amplitude = new_offset, new_amplitude
        logger.info(
            "fringe fit iteration %d: A=%.9g B=%.9g change=%.3g", iterations, offset, amplitude, change,
        )
        if change < FIT_RTOL:
            break
    return FringeFit(offset=offset, amplitude=amplitude, iterations=iterations)


def determine_phases(ds: SweepDataset, arm: int = 1) -> FringeFit:
    means = fringe_means(ds, arm)
    fit = fit_cosine(means, fringe_stderr(ds, arm))
    _, clamped = normalize(means, fit)
    return replace(fit, per_step_phase=retrieve_phases(means, fit), clamped=clamped)


# ---------------------------------------------------------------------------
# Post-selection
# ---------------------------------------------------------------------------

def _stable_seed(*parts: object) -> int:
    payload = "|".join(repr(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def _wrap(angle: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.angle(np.exp(1j * angle))


def _cell_widths(offsets: NDArray[np.float64], half: float) -> NDArray[np.float64]:
    """Phase width each step represents inside [-half, half]; repeated phases split their cell."""
    unique, inverse, repeats = np.unique(offsets, return_inverse=True, return_counts=True)
    edges = np.concatenate(([-half], 0.5 * (unique[1:] + unique[:-1]), [half]))
    return (np.diff(edges) / repeats)[inverse]


def _largest_remainder(total: int, weights: NDArray[np.float64]) -> NDArray[np.int64]:
    quota = total * weights / weights.sum()
    drawn = np.floor(quota).astype(np.int64)
    short = total - int(drawn.sum())
    if short > 0:
        # Ties resolve to the lower index (stable sort).
        order = np.argsort(-(quota - drawn), kind="stable")
        drawn[order[:short]] += 1
    return drawn


def post_select(
    ds: SweepDataset,
    phases: ArrayLike,
    center: float,
    gamma: float,
    seed: Optional[int] = None,
) -> BracketEnsemble:
    """
    Pool the shots of every step whose phase falls within gamma/2 of
    center or of center + pi.

    Both windows contribute the same number of shots, and within a window
    each step is resampled in proportion to the phase width it covers, so
    the pooled phase measure is uniform even for an irregular sweep. The
    resampling stream is keyed on (seed, center, gamma); seed defaults to
    the sweep seed.

    Steps clamped by `normalize` carry phases of exactly 0 or pi, so a
    window centered there is never empty once any step was clamped,
    however narrow it is.
    """
    if not (math.isfinite(gamma) and 0.0 < gamma <= math.pi):
        raise DomainError(field="gamma", bound="0 < gamma <= pi", value=gamma)
    phi = np.asarray(phases, dtype=float)
    steps = ds.config.steps
    if phi.shape != (steps,):
        raise DomainError(field="phases", bound=f"len(phases) == {steps}", value=int(phi.size))

    half = 0.5 * gamma
    per_step = np.bincount(ds.step, minlength=steps)
    order = np.argsort(ds.step, kind="stable")
    starts = np.concatenate(([0], np.cumsum(per_step)))

    windows = []
    for w, c in enumerate((center, center + math.pi)):
        offsets = _wrap(phi - c)
        members = np.flatnonzero(np.abs(offsets) <= half + 1e-12)
        if members.size == 0:
            raise EmptyWindowError(center=c, gamma=gamma, low=c - half, high=c + half)
        windows.append((w, members, np.clip(offsets[members], -half, half)))

    target = int(round(np.mean([per_step[members].sum() for _, members, _ in windows])))
    rng = np.random.Generator(np.random.Philox(
        np.random.SeedSequence(_stable_seed(ds.config.seed if seed is None else seed, float(center), float(gamma)))
    ))

    pooled_idx: list[NDArray[np.int64]] = []
    records: list[StepWeight] = []
    for w, members, offsets in windows:
        widths = _cell_widths(offsets, half)
        drawn = _largest_remainder(target, widths)
        for j, offset, width, k in zip(members, offsets, widths, drawn):
            if k > 0 and per_step[j] > 0:
                picks = rng.integers(0, per_step[j], size=int(k))
                pooled_idx.append(order[starts[j] + picks])
            records.append(StepWeight(
                step=int(j), window=w, offset=float(offset), weight=float(width), drawn=int(k),
            ))
        logger.info(
            "window %d around %.6g: %d steps, %d shots drawn", w, center + w * math.pi, members.size, target,
        )

    idx = rng.permutation(np.concatenate(pooled_idx)) if pooled_idx else np.zeros(0, dtype=np.int64)
    return BracketEnsemble(
        center_phase=float(center),
        gamma=float(gamma),
        pooled=np.column_stack((ds.n1[idx], ds.n2[idx])).astype(np.int64),
        pooled_steps=ds.step[idx].astype(np.int64),
        weights=tuple(records),
    )


def ensemble_stats(e: BracketEnsemble, batches: int = 50) -> EnsembleStats:
    if len(e) < 2:
        raise DegenerateInputError("Ensemble needs at least two pooled shots.", size=len(e))
    n1 = e.pooled[:, 0]
    n2 = e.pooled[:, 1]
    stats = EnsembleStats(
        fano1=simshot.sample_fano(n1),
        fano2=simshot.sample_fano(n2),
        gamma_corr=simshot.sample_correlation(e.pooled),
        histogram1=photostat.histogram(n1),
        histogram2=photostat.histogram(n2),
    )
    if len(e) < 2 * batches:
        return stats
    return replace(
        stats,
        fano1_err=simshot.batch_stderr(n1, simshot.sample_fano, batches)[1],
        fano2_err=simshot.batch_stderr(n2, simshot.sample_fano, batches)[1],
        gamma_corr_err=simshot.batch_stderr(e.pooled, simshot.sample_correlation, batches)[1],
    )
