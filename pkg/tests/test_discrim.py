"""
Tests for the displacement-receiver error probability.

Covered:
  - closed-form Kennedy limit e^{-4 eta b^2} / 2
  - vacuum, direct detection and threshold variants
  - degradation with phase spread and preparation dephasing
  - efficiency as amplitude rescaling
  - Monte Carlo agreement, grid ordering and validation
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from brackets.core.errors import DomainError
from brackets.schemas.discrim import ReceiverSpec
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.states import Displacement
from brackets.services import discrim
from tests.helpers import MC_SEED

IDEAL = ReceiverSpec()


class TestHypothesisCountDist:
    def test_nulled_hypothesis_is_vacuum(self):
        dist = discrim.hypothesis_count_dist(-1, 1.2, 0.0, 0.0, IDEAL)
        assert dist.probs[0] == pytest.approx(1.0)

    def test_other_hypothesis_is_doubled(self):
        dist = discrim.hypothesis_count_dist(+1, 1.0, 0.0, 0.0, IDEAL)
        assert dist.mean == pytest.approx(4.0)
        assert dist.probs[0] == pytest.approx(math.exp(-4.0), rel=1e-12)

    def test_bad_sign(self):
        with pytest.raises(DomainError) as exc:
            discrim.hypothesis_count_dist(0, 1.0, 0.0, 0.0, IDEAL)
        assert exc.value.details["field"] == "sign"

    def test_dephase_must_be_finite(self):
        with pytest.raises(DomainError):
            discrim.hypothesis_count_dist(1, 1.0, 0.0, math.inf, IDEAL)


class TestErrorProbability:
    @pytest.mark.parametrize("b", [0.5, 1.0, 1.5])
    def test_kennedy_limit(self, b):
        assert discrim.error_probability(b, 0.0, 0.0, IDEAL) == pytest.approx(
            0.5 * math.exp(-4.0 * b * b), abs=1e-10,
        )

    def test_reference_value(self):
        assert discrim.error_probability(1.0, 0.0, 0.0, IDEAL) == pytest.approx(0.00915781944, abs=1e-11)

    def test_lossy_kennedy_limit(self):
        rx = ReceiverSpec(det=DetectorModel(eta=0.6))
        assert discrim.error_probability(1.0, 0.0, 0.0, rx) == pytest.approx(
            0.5 * math.exp(-4.0 * 0.6), abs=1e-10,
        )

    def test_zero_amplitude_is_a_coin_flip(self):
        assert discrim.error_probability(0.0, 0.7, 0.0, IDEAL) == pytest.approx(0.5)

    def test_direct_detection_cannot_tell_signs(self):
        rx = ReceiverSpec(displacement=Displacement(mag=0.0))
        assert discrim.error_probability(1.3, 0.0, 0.0, rx) == pytest.approx(0.5, abs=1e-12)

    def test_threshold_two(self):
        rx = ReceiverSpec(threshold=2)
        assert discrim.error_probability(1.0, 0.0, 0.0, rx) == pytest.approx(2.5 * math.exp(-4.0), abs=1e-10)

    def test_increases_with_phase_spread(self):
        p = [discrim.error_probability(1.0, g, 0.0, IDEAL) for g in (0.0, 0.5, 1.0, 2.0, math.pi)]
        assert all(a < b for a, b in zip(p, p[1:]))

    def test_increases_with_dephasing(self):
        assert discrim.error_probability(1.0, 0.0, 0.3, IDEAL) > discrim.error_probability(1.0, 0.0, 0.0, IDEAL)

    @pytest.mark.parametrize("gamma, dephase", [(0.0, 0.0), (1.0, 0.2), (math.pi, 0.5)])
    def test_efficiency_is_amplitude_scaling(self, gamma, dephase):
        eta = 0.5
        lossy = discrim.error_probability(1.2, gamma, dephase, ReceiverSpec(det=DetectorModel(eta=eta)))
        scaled = discrim.error_probability(1.2 * math.sqrt(eta), gamma, dephase, IDEAL)
        assert lossy == pytest.approx(scaled, abs=1e-12)

    def test_matches_monte_carlo(self):
        b, gamma, dephase, n = 0.7, math.pi / 2, 0.2, 1_000_000
        rng = np.random.default_rng(MC_SEED)
        sign = rng.choice([-1.0, 1.0], size=n)
        psi = rng.uniform(-gamma / 2, gamma / 2, size=n)
        counts = rng.poisson(np.abs(b + sign * b * np.exp(1j * (dephase + psi))) ** 2)
        wrong = np.where(sign > 0, counts < 1, counts >= 1)
        p_mc = float(wrong.mean())
        p = discrim.error_probability(b, gamma, dephase, IDEAL)
        assert abs(p_mc - p) <= 5.0 * math.sqrt(p * (1.0 - p) / n)

    def test_negative_amplitude(self):
        with pytest.raises(DomainError) as exc:
            discrim.error_probability(-1.0, 0.0, 0.0, IDEAL)
        assert exc.value.details["field"] == "b"


class TestSweepError:
    def test_single_cell(self):
        (row,) = discrim.sweep_error([1.0], [0.0], IDEAL)
        assert (row.b, row.gamma, row.dephase) == (1.0, 0.0, 0.0)
        assert row.p_error == pytest.approx(0.5 * math.exp(-4.0), abs=1e-10)

    def test_b_outermost(self):
        rows = discrim.sweep_error([1.0, 2.0], [0.0, 1.0], IDEAL, dephases=(0.0, 0.1))
        assert [(r.b, r.gamma, r.dephase) for r in rows] == [
            (1.0, 0.0, 0.0), (1.0, 0.0, 0.1), (1.0, 1.0, 0.0), (1.0, 1.0, 0.1),
            (2.0, 0.0, 0.0), (2.0, 0.0, 0.1), (2.0, 1.0, 0.0), (2.0, 1.0, 0.1),
        ]

    def test_workers_do_not_change_rows(self):
        serial = discrim.sweep_error([0.5, 1.0, 1.5], [0.0, 1.0], IDEAL, workers=1)
        threaded = discrim.sweep_error([0.5, 1.0, 1.5], [0.0, 1.0], IDEAL, workers=3)
        assert serial == threaded

    @pytest.mark.parametrize("field", ["bs", "gammas", "dephases"])
    def test_empty_grid(self, field):
        grids = {"bs": [1.0], "gammas": [0.0], "dephases": [0.0]}
        grids[field] = []
        with pytest.raises(DomainError) as exc:
            discrim.sweep_error(grids["bs"], grids["gammas"], IDEAL, dephases=grids["dephases"])
        assert exc.value.details["field"] == field
