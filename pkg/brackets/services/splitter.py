"""
Intensity correlations at the two outputs of a beam splitter.

An input of Fano factor F split with transmissivity tau and detected with
efficiencies eta1, eta2 is two binomial thinnings of the same photon
number, with survival probabilities t1 = tau*eta1 and t2 = (1-tau)*eta2.
Their Pearson coefficient is

    Gamma = (F-1) sqrt(t1 t2) / sqrt([t1 F + 1 - t1][t2 F + 1 - t2])

which is the textbook expression with (t1, t2) = (tau, 1-tau), and the
detected single-arm Fano factor is 1 + t (F - 1).

Public API
----------
gamma_coeff(fano, tau)                        -> float
gamma_balanced(fano)                          -> float
gamma_thinned(fano, t1, t2)                   -> float
detected_fano(fano, eta)                      -> float
phase_curves(spec, mag, split, phis)          -> list[CurveRow]
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from brackets.core.errors import DomainError
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import BracketSpec, Displacement
from brackets.services import states


@dataclass(frozen=True)
class CurveRow:
    phi: float
    fano_detected: float
    gamma: float


def _check_fano(fano: float) -> None:
    # Sub-Poissonian input cannot come from a classical mixture.
    if not (math.isfinite(fano) and fano >= 1.0):
        raise DomainError(field="fano", bound="fano >= 1", value=fano)


def _check_unit(name: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise DomainError(field=name, bound=f"0 <= {name} <= 1", value=value)


def gamma_thinned(fano: float, t1: float, t2: float) -> float:
    _check_fano(fano)
    _check_unit("t1", t1)
    _check_unit("t2", t2)
    if t1 == 0.0 or t2 == 0.0:
        return 0.0
    excess = fano - 1.0
    return excess * math.sqrt(t1 * t2) / math.sqrt(
        (t1 * fano + 1.0 - t1) * (t2 * fano + 1.0 - t2)
    )


def gamma_coeff(fano: float, tau: float) -> float:
    if not (math.isfinite(tau) and 0.0 < tau < 1.0):
        raise DomainError(field="tau", bound="0 < tau < 1", value=tau)
    _check_fano(fano)
    return (fano - 1.0) * math.sqrt(tau * (1.0 - tau)) / math.sqrt(
        (fano * tau + (1.0 - tau)) * (fano * (1.0 - tau) + tau)
    )


def gamma_balanced(fano: float) -> float:
    _check_fano(fano)
    return (fano - 1.0) / (fano + 1.0)


def detected_fano(fano: float, eta: float) -> float:
    _check_fano(fano)
    _check_unit("eta", eta)
    return 1.0 + eta * (fano - 1.0)


def phase_curves(
    spec: BracketSpec,
    mag: float,
    split: SplitterSpec,
    phis: Iterable[float],
) -> list[CurveRow]:
    """
    Arm-1 detected Fano factor and output correlation versus relative phase.

    The Fano factor is the one seen by the arm-1 detector (overall thinning
    tau*eta1); the correlation accounts for both arms' thinning.
    """
    rows: list[CurveRow] = []
    for phi in phis:
        f = states.fano(spec, Displacement(mag=mag, phase=phi))
        rows.append(CurveRow(
            phi=float(phi),
            fano_detected=detected_fano(f, split.t1),
            gamma=gamma_thinned(f, split.t1, split.t2),
        ))
    return rows
