"""
Averages over a uniform phase psi ~ U(-gamma/2, +gamma/2) by Gauss-Legendre
quadrature.

The node count starts from a floor that grows with gamma * scale (scale is
the largest field amplitude in the integrand) and is doubled until two
successive results agree to the configured relative tolerance.

Public API
----------
legendre_rule(n)                               -> (nodes, weights) on [-1, 1]
phase_average(fn, gamma, scale)                -> ndarray
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from brackets.core.config import settings

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def legendre_rule(n: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _initial_order(gamma: float, scale: float) -> int:
    floor = settings.QUAD_MIN_NODES
    wanted = math.ceil(2.0 * gamma * max(scale, 1.0))
    order = floor
    while order < wanted and order < settings.QUAD_MAX_NODES:
        order *= 2
    return order


def _average(fn: Callable[[NDArray[np.float64]], NDArray[np.float64]], gamma: float, n: int):
    x, w = legendre_rule(n)
    psi = 0.5 * gamma * x
    values = fn(psi)
    # (1/gamma) * integral = (1/2) * sum(w f), broadcast over trailing axes.
    return 0.5 * np.tensordot(w, values, axes=(0, 0))


def phase_average(
    fn: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    gamma: float,
    scale: float,
) -> NDArray[np.float64]:
    """
    Mean of fn(psi) over psi uniform on [-gamma/2, gamma/2].

    fn receives the 1-D array of nodes and returns an array whose first axis
    runs over the nodes. gamma = 0 evaluates fn at psi = 0 exactly.
    """
    if gamma == 0.0:
        return np.asarray(fn(np.zeros(1)))[0]

    n = _initial_order(gamma, scale)
    current = _average(fn, gamma, n)
    while n < settings.QUAD_MAX_NODES:
        n *= 2
        refined = _average(fn, gamma, n)
        peak = float(np.max(np.abs(refined))) if refined.size else 0.0
        if float(np.max(np.abs(refined - current), initial=0.0)) <= settings.QUAD_RTOL * peak:
            return refined
        current = refined

    logger.warning(
        "psi quadrature not converged at %d nodes (gamma=%.6g, scale=%.6g)",
        n, gamma, scale,
    )
    return current
