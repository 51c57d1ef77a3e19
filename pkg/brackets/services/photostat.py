"""
Detected-photon statistics of displaced bracket states.

A classical mixture of coherent states detected with efficiency eta is a
mixture of Poisson distributions with means eta * |A|^2; binomial thinning
keeps that form, so efficiency is applied by rescaling field amplitudes by
sqrt(eta) and then counting ideally. Every distribution in the package goes
through `phase_mixture`:

    P(m) = (1/K) sum_k avg_psi Poisson(m; eta |offset + a_k e^{i psi}|^2)

Truncation: m_bar is the smallest cutoff whose upper tail under the largest
attainable component mean is below settings.PHOTON_TAIL. Poisson tails grow
with the mean, so this bounds the tail of every component at once.

Public API
----------
phase_mixture(offset, amplitudes, gamma, eta)  -> PhotonDistribution
distribution(spec, disp, det)                  -> PhotonDistribution
thin_equivalence(spec, disp, det)              -> PhotonDistribution
histogram(counts)                              -> PhotonDistribution
moments(p)                                     -> Moments
fidelity(p, q)                                 -> float
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats
from scipy.special import gammaln, xlogy

from brackets.core.config import settings
from brackets.core.errors import DegenerateInputError, DomainError
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.states import BracketSpec, Displacement
from brackets.services import states
from brackets.services.quadrature import phase_average


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhotonDistribution:
    """
    Truncated detected-photon distribution P(0..m_bar).

    mean / variance are the full moments: analytic values for model
    distributions (sequence moments plus the truncated tail), plain sample
    moments for histograms. tail_bound is the probability mass that may
    sit beyond m_bar.
    """
    probs: NDArray[np.float64]
    mean: float
    variance: float
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        self.probs.flags.writeable = False

    @property
    def cutoff(self) -> int:
        return len(self.probs) - 1

    @property
    def fano(self) -> float:
        if self.mean <= 0.0:
            raise DegenerateInputError("Fano factor undefined for a zero-mean distribution.")
        return self.variance / self.mean


@dataclass(frozen=True)
class Moments:
    mean: float
    variance: float
    fano: float
    # Upper bound on the probability mass excluded by truncation.
    tail_bound: float


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _cutoff(max_mean: float) -> int:
    if max_mean <= 0.0:
        return 0
    m = int(max_mean)
    while stats.poisson.sf(m, max_mean) >= settings.PHOTON_TAIL:
        m += max(1, int(math.sqrt(max_mean)) // 4)
    # Walk back to the smallest cutoff meeting the rule.
    while m > 0 and stats.poisson.sf(m - 1, max_mean) < settings.PHOTON_TAIL:
        m -= 1
    return m


def _log_poisson(m: NDArray[np.float64], mu: NDArray[np.float64]) -> NDArray[np.float64]:
    # xlogy keeps the mu = 0 rows finite: log P(0; 0) = 0.
    return xlogy(m, mu) - mu - gammaln(m + 1.0)


# ---------------------------------------------------------------------------
# Model distributions
# ---------------------------------------------------------------------------

def phase_mixture(
    offset: complex,
    amplitudes: Sequence[complex],
    gamma: float,
    eta: float = 1.0,
) -> PhotonDistribution:
    """
    Equal-weight mixture over `amplitudes`, each rotated by psi ~ U(-gamma/2, gamma/2)
    and added to the fixed `offset`, detected with efficiency eta.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(field="eta", bound="0 <= eta <= 1", value=eta)
    states.sinc_gamma(gamma)

    root = math.sqrt(eta)
    off = root * complex(offset)
    amps = [root * complex(a) for a in amplitudes]

    largest = abs(off) + max(abs(a) for a in amps)
    m_bar = _cutoff(largest * largest)
    m = np.arange(m_bar + 1, dtype=float)

    def integrand(psi: NDArray[np.float64]) -> NDArray[np.float64]:
        rot = np.exp(1j * psi)
        total = np.zeros((len(psi), m_bar + 1))
        for a in amps:
            mu = np.abs(off + a * rot) ** 2
            total += np.exp(_log_poisson(m[None, :], mu[:, None]))
        return total / len(amps)

    probs = phase_average(integrand, gamma, largest)
    probs = np.clip(probs, 0.0, None)
    mass = float(np.sum(probs))
    if mass > 1.0:
        probs = probs / mass

    mean, variance = _mixture_moments(off, amps, gamma)
    return PhotonDistribution(
        probs=probs,
        mean=mean,
        variance=variance,
        tail_bound=float(stats.poisson.sf(m_bar, largest * largest)),
    )


def _mixture_moments(off: complex, amps: list[complex], gamma: float) -> tuple[float, float]:
    """Exact mean and variance of the Poisson mixture (variance = E[mu] + Var[mu])."""
    # E[cos psi] = sinc(gamma/2), E[cos 2 psi] = sinc(gamma).
    s1 = states.sinc_gamma(0.5 * gamma)
    s2 = states.sinc_gamma(gamma)
    first = 0.0
    second = 0.0
    for a in amps:
        # mu(psi) = |off|^2 + |a|^2 + 2 Re(conj(off) a e^{i psi})
        base = abs(off) ** 2 + abs(a) ** 2
        c = 2.0 * (off.conjugate() * a)
        # E[Re(c e^{i psi})^2] = |c|^2/2 + Re(c^2) s2/2
        e1 = base + c.real * s1
        e2 = base * base + 2.0 * base * c.real * s1 + 0.5 * (abs(c) ** 2 + (c * c).real * s2)
        first += e1
        second += e2
    first /= len(amps)
    second /= len(amps)
    return first, first + (second - first * first)


def distribution(spec: BracketSpec, disp: Displacement, det: DetectorModel) -> PhotonDistribution:
    """Detected-photon distribution of the bracket state displaced by disp."""
    return phase_mixture(disp.amplitude, [spec.b, -spec.b], spec.gamma, det.eta)


def thin_equivalence(spec: BracketSpec, disp: Displacement, det: DetectorModel) -> PhotonDistribution:
    """Same distribution computed as an ideal detection of sqrt(eta)-scaled fields."""
    root = math.sqrt(det.eta)
    scaled_spec = BracketSpec(b=root * spec.b, gamma=spec.gamma)
    scaled_disp = Displacement(mag=root * disp.mag, phase=disp.phase)
    return distribution(scaled_spec, scaled_disp, DetectorModel(eta=1.0))


def histogram(counts: ArrayLike) -> PhotonDistribution:
    """Empirical distribution of non-negative integer counts; m_bar = largest count."""
    values = np.asarray(counts, dtype=np.int64)
    if values.size == 0:
        raise DegenerateInputError("Cannot build a histogram from zero counts.")
    if int(values.min()) < 0:
        raise DomainError(field="counts", bound="counts >= 0", value=int(values.min()))
    probs = np.bincount(values).astype(float) / values.size
    return PhotonDistribution(
        probs=probs,
        mean=float(values.mean()),
        variance=float(values.var()),
    )


# ---------------------------------------------------------------------------
# Moments and fidelity
# ---------------------------------------------------------------------------

def moments(p: PhotonDistribution) -> Moments:
    """Moments of the stored (truncated) sequence; tail_bound is carried over."""
    m = np.arange(len(p.probs), dtype=float)
    mean = float(np.dot(m, p.probs))
    if mean == 0.0:
        raise DegenerateInputError("Fano factor undefined for a zero-mean distribution.")
    variance = float(np.dot((m - mean) ** 2, p.probs))
    return Moments(mean=mean, variance=variance, fano=variance / mean, tail_bound=p.tail_bound)


def fidelity(p: PhotonDistribution, q: PhotonDistribution) -> float:
    """sum_m sqrt(P(m) Q(m)); the shorter sequence is zero-padded, never renormalized."""
    size = max(len(p.probs), len(q.probs))
    a = np.zeros(size)
    b = np.zeros(size)
    a[: len(p.probs)] = p.probs
    b[: len(q.probs)] = q.probs
    return float(min(1.0, np.sum(np.sqrt(a * b))))
