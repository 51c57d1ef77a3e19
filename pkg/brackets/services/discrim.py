"""
Kennedy-like receiver for binary phase-shift keyed coherent states under
bracket-type phase noise and preparation dephasing.

The two hypotheses are sign * b e^{i(dephase + psi)} with psi uniform on
[-gamma/2, gamma/2]. The receiver adds beta (default: beta = b, which
nulls the "-" hypothesis when gamma = dephase = 0), counts photons and
declares "+" when the count reaches the threshold. Priors are equal:

    P_e = 1/2 [ P(n >= th | -) + P(n < th | +) ]

Public API
----------
hypothesis_count_dist(sign, b, gamma, dephase, rx)   -> PhotonDistribution
error_probability(b, gamma, dephase, rx)             -> float
sweep_error(bs, gammas, rx, dephases, workers)       -> list[ErrorRow]
"""
from __future__ import annotations

import cmath
import itertools
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from brackets.core.config import settings
from brackets.core.errors import DomainError
from brackets.schemas.discrim import ReceiverSpec
from brackets.services import photostat, states
from brackets.services.photostat import PhotonDistribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorRow:
    b: float
    gamma: float
    dephase: float
    p_error: float


def _nulling_field(b: float, rx: ReceiverSpec) -> complex:
    if rx.displacement is None:
        return complex(b, 0.0)
    return rx.displacement.amplitude


def hypothesis_count_dist(
    sign: int,
    b: float,
    gamma: float,
    dephase: float,
    rx: ReceiverSpec,
) -> PhotonDistribution:
    if sign not in (1, -1):
        raise DomainError(field="sign", bound="sign in {+1, -1}", value=sign)
    if not math.isfinite(dephase):
        raise DomainError(field="dephase", bound="finite", value=dephase)
    states.validate({"b": b, "gamma": gamma})
    amplitude = sign * b * cmath.exp(1j * dephase)
    return photostat.phase_mixture(_nulling_field(b, rx), [amplitude], gamma, rx.det.eta)


def error_probability(b: float, gamma: float, dephase: float, rx: ReceiverSpec) -> float:
    minus = hypothesis_count_dist(-1, b, gamma, dephase, rx).probs
    plus = hypothesis_count_dist(+1, b, gamma, dephase, rx).probs
    th = rx.threshold
    # Counts equal to the threshold are declared "+".
    false_plus = 1.0 - float(np.sum(minus[:th]))
    missed_plus = float(np.sum(plus[:th]))
    return min(1.0, max(0.0, 0.5 * (false_plus + missed_plus)))


def sweep_error(
    bs: Sequence[float],
    gammas: Sequence[float],
    rx: ReceiverSpec,
    dephases: Sequence[float] = (0.0,),
    workers: Optional[int] = None,
) -> list[ErrorRow]:
    """Cross product b x gamma x dephase, b outermost, in input order."""
    for name, grid in (("bs", bs), ("gammas", gammas), ("dephases", dephases)):
        if len(grid) == 0:
            raise DomainError(field=name, bound="non-empty grid", value=0)
    cells = list(itertools.product(bs, gammas, dephases))

    def evaluate(cell: tuple[float, float, float]) -> ErrorRow:
        b, gamma, dephase = cell
        return ErrorRow(
            b=float(b),
            gamma=float(gamma),
            dephase=float(dephase),
            p_error=error_probability(b, gamma, dephase, rx),
        )

    workers = workers or settings.WORKERS
    logger.info("error-probability grid: %d cells, %d workers", len(cells), workers)
    if workers <= 1:
        return [evaluate(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, cells))
