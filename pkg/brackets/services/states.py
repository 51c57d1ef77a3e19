"""
Closed-form physics of bracket states.

The bracket state is the balanced mixture of |±b e^{i psi}> with psi
uniform on [-gamma/2, +gamma/2], centered on the real axis. A displacement
alpha = |alpha| e^{i phi} rotates the measurement relative to that axis;
phi is the only way a rotation enters, there is no third state parameter.

Operator moments are resolved into scalar formulas:

    <x_phi>          = 0
    Var[x_phi]       = 1/2 + b^2 [1 + cos(2 phi) sin(gamma)/gamma]
    <N>              = b^2 + |alpha|^2
    Var[N]           = b^2 + 2 |alpha|^2 Var[x_phi]
    F                = Var[N] / <N>  >= 1

Public API
----------
validate(spec)                        -> BracketSpec
sinc_gamma(gamma)                     -> float
quadrature_mean(spec, phi)            -> float
quadrature_variance(spec, phi)        -> float | ndarray
displaced_mean(spec, disp)            -> float
displaced_variance(spec, disp)        -> float
fano(spec, disp)                      -> float
phase_from_fano(spec, mag, fano)      -> float
wigner(spec, z)                       -> float
wigner_grid(spec, extent, n)          -> WignerGrid
wigner_normalization(spec, radius)    -> float
"""
from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import ValidationError

from brackets.core.errors import DegenerateInputError, DomainError, validation_error_to_domain
from brackets.schemas.states import BracketSpec, Displacement, PhasePoint
from brackets.services.quadrature import legendre_rule, phase_average


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerGrid:
    """
    n x n evaluations of W on [-extent, extent]^2.

    values[i, j] = W(x[i] + i*y[j]); rows of the CSV run over x (outer)
    then y (inner), i.e. the row-major flattening of `values`.
    """
    x: NDArray[np.float64]
    y: NDArray[np.float64]
    values: NDArray[np.float64]

    def points(self) -> Iterator[tuple[PhasePoint, float]]:
        for i, xi in enumerate(self.x):
            for j, yj in enumerate(self.y):
                yield PhasePoint(re=float(xi), im=float(yj)), float(self.values[i, j])

    def argmax(self) -> PhasePoint:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return PhasePoint(re=float(self.x[i]), im=float(self.y[j]))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(spec: Union[BracketSpec, Mapping[str, Any]]) -> BracketSpec:
    """
    Return the state unchanged when b >= 0 and 0 <= gamma <= pi (both finite).

    Accepts a raw mapping as well, so callers holding untrusted input get a
    DomainError naming the violated bound instead of a pydantic error.
    """
    raw = spec.model_dump() if isinstance(spec, BracketSpec) else dict(spec)
    try:
        checked = BracketSpec.model_validate(raw)
    except ValidationError as exc:
        raise validation_error_to_domain(exc) from exc
    return spec if isinstance(spec, BracketSpec) else checked


# ---------------------------------------------------------------------------
# Quadrature moments
# ---------------------------------------------------------------------------

def sinc_gamma(gamma: float) -> float:
    """sin(gamma)/gamma on [0, pi], exactly 1 at 0 and exactly 0 at pi."""
    if not (math.isfinite(gamma) and 0.0 <= gamma <= math.pi):
        raise DomainError(field="gamma", bound="0 <= gamma <= pi", value=gamma)
    if gamma == 0.0:
        return 1.0
    if gamma == math.pi:
        return 0.0
    return min(1.0, math.sin(gamma) / gamma)


def quadrature_mean(spec: BracketSpec, phi: float) -> float:
    # The +b and -b halves cancel for every phi.
    return 0.0


def quadrature_variance(spec: BracketSpec, phi: ArrayLike) -> Union[float, NDArray[np.float64]]:
    s = sinc_gamma(spec.gamma)
    return 0.5 + spec.b * spec.b * (1.0 + np.cos(2.0 * np.asarray(phi, dtype=float)) * s)


# ---------------------------------------------------------------------------
# Displaced-state photon-number moments
# ---------------------------------------------------------------------------

def displaced_mean(spec: BracketSpec, disp: Displacement) -> float:
    return spec.b * spec.b + disp.mag * disp.mag


def displaced_variance(spec: BracketSpec, disp: Displacement) -> float:
    # The undisplaced bracket is Poissonian: Var_rho[N] = b^2.
    return spec.b * spec.b + 2.0 * disp.mag * disp.mag * float(
        quadrature_variance(spec, disp.phase)
    )


def fano(spec: BracketSpec, disp: Displacement) -> float:
    """Var[N]/<N> of the displaced bracket state; raises on the 0/0 vacuum case."""
    mean = displaced_mean(spec, disp)
    if mean == 0.0:
        raise DegenerateInputError(
            "Fano factor undefined for b = |alpha| = 0.", b=spec.b, mag=disp.mag,
        )
    return displaced_variance(spec, disp) / mean


def phase_from_fano(spec: BracketSpec, mag: float, fano_value: float) -> float:
    """
    Invert F(phi) for phi in [0, pi/2].

    F is even and pi-periodic in phi, so [0, pi/2] is the identifiable
    range. Values outside the attainable [F(pi/2), F(0)] band clip to the
    nearest endpoint.
    """
    s = sinc_gamma(spec.gamma)
    b2 = spec.b * spec.b
    m2 = mag * mag
    if b2 == 0.0 or m2 == 0.0 or s == 0.0:
        raise DegenerateInputError(
            "Fano factor carries no phase information for these parameters.",
            b=spec.b, mag=mag, gamma=spec.gamma,
        )
    qvar = (fano_value * (b2 + m2) - b2) / (2.0 * m2)
    cos2phi = (qvar - 0.5 - b2) / (b2 * s)
    return 0.5 * math.acos(min(1.0, max(-1.0, cos2phi)))


# ---------------------------------------------------------------------------
# Wigner function
# ---------------------------------------------------------------------------

def _wigner_values(spec: BracketSpec, x: NDArray[np.float64], y: NDArray[np.float64]):
    b = spec.b

    def integrand(psi: NDArray[np.float64]) -> NDArray[np.float64]:
        c = b * np.cos(psi)[:, None]
        s = b * np.sin(psi)[:, None]
        plus = np.exp(-2.0 * ((x - c) ** 2 + (y - s) ** 2))
        minus = np.exp(-2.0 * ((x + c) ** 2 + (y + s) ** 2))
        return plus + minus

    scale = max(b, float(np.max(np.hypot(x, y), initial=0.0)))
    return phase_average(integrand, spec.gamma, scale) / math.pi


def wigner(spec: BracketSpec, z: PhasePoint) -> float:
    """W(z) = (1/pi) sum_k avg_psi exp(-2 |z - (-1)^k b e^{i psi}|^2), always >= 0."""
    x = np.array([z.re], dtype=float)
    y = np.array([z.im], dtype=float)
    return float(_wigner_values(spec, x, y)[0])


def wigner_grid(spec: BracketSpec, extent: float, n: int) -> WignerGrid:
    if n < 2:
        raise DomainError(field="n", bound="n >= 2", value=n)
    if not (math.isfinite(extent) and extent > 0.0):
        raise DomainError(field="extent", bound="extent > 0", value=extent)

    # Built from a centered integer ramp so coords[k] == -coords[n-1-k] exactly.
    coords = (np.arange(n, dtype=float) - (n - 1) / 2.0) * (2.0 * extent / (n - 1))
    xx, yy = np.meshgrid(coords, coords, indexing="ij")
    values = _wigner_values(spec, xx.ravel(), yy.ravel()).reshape(n, n)
    return WignerGrid(x=coords, y=coords.copy(), values=values)


def wigner_normalization(spec: BracketSpec, radius: Optional[float] = None) -> float:
    """Integral of W over the disk |z| <= radius (default b + 6)."""
    r_max = spec.b + 6.0 if radius is None else radius
    n_theta = 256 + 64 * math.ceil(spec.b)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    cos_t, sin_t = np.cos(theta), np.sin(theta)

    nodes, weights = legendre_rule(200)
    radii = 0.5 * r_max * (nodes + 1.0)
    total = 0.0
    for r, w in zip(radii, weights):
        ring = _wigner_values(spec, r * cos_t, r * sin_t)
        # Trapezoid in theta is spectrally accurate for periodic integrands.
        total += w * r * (2.0 * math.pi * float(np.mean(ring)))
    return 0.5 * r_max * total
