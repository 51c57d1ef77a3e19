"""
Tests for detected-photon distributions.

Covered:
  - Poisson limit and exact mixture moments
  - efficiency as amplitude rescaling (thin_equivalence)
  - truncation keeps total mass within the tail bound
  - phase independence of the phase-averaged state
  - histogram / moments / fidelity helpers and their error paths
  - agreement with Monte Carlo arm counts (fidelity >= 0.999)
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from brackets.core.errors import DegenerateInputError, DomainError
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import BracketSpec, Displacement
from brackets.services import photostat, simshot, splitter, states
from tests.helpers import MC_SEED


class TestPhaseMixture:
    def test_poisson_limit(self):
        dist = photostat.phase_mixture(2.0, [0.0], 0.0)
        assert dist.probs[0] == pytest.approx(math.exp(-4.0), rel=1e-12)
        assert dist.mean == pytest.approx(4.0)
        assert dist.variance == pytest.approx(4.0)

    def test_vacuum_has_single_bin(self):
        dist = photostat.phase_mixture(0.0, [0.0], 0.0)
        assert dist.cutoff == 0
        assert dist.probs[0] == pytest.approx(1.0)

    def test_efficiency_out_of_range(self):
        with pytest.raises(DomainError) as exc:
            photostat.phase_mixture(1.0, [1.0], 0.0, eta=1.5)
        assert exc.value.details["field"] == "eta"

    def test_gamma_out_of_range(self):
        with pytest.raises(DomainError):
            photostat.phase_mixture(1.0, [1.0], 4.0)


class TestDistribution:
    def test_moments_match_closed_form(self, ref_spec, lo):
        dist = photostat.distribution(ref_spec, lo, DetectorModel())
        assert dist.mean == pytest.approx(8.0, rel=1e-12)
        assert dist.variance == pytest.approx(40.0 + 64.0 / math.pi, rel=1e-12)
        assert dist.fano == pytest.approx(states.fano(ref_spec, lo), rel=1e-12)

    def test_truncated_moments_close_to_full(self, ref_spec, lo):
        dist = photostat.distribution(ref_spec, lo, DetectorModel())
        m = photostat.moments(dist)
        assert m.mean == pytest.approx(dist.mean, rel=1e-4)
        assert m.tail_bound < 1e-7

    def test_mass_within_tail_bound(self, ref_spec, lo):
        dist = photostat.distribution(ref_spec, lo, DetectorModel(eta=0.7))
        total = float(dist.probs.sum())
        assert total <= 1.0 + 1e-12
        assert total >= 1.0 - 1e-6

    @pytest.mark.parametrize("eta", [0.25, 0.5, 0.9])
    def test_efficiency_thins_fano(self, ref_spec, lo, eta):
        dist = photostat.distribution(ref_spec, lo, DetectorModel(eta=eta))
        expected = splitter.detected_fano(states.fano(ref_spec, lo), eta)
        assert dist.fano == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("eta", [0.3, 0.5, 1.0])
    def test_thin_equivalence(self, ref_spec, eta):
        disp = Displacement(mag=2.0, phase=0.6)
        det = DetectorModel(eta=eta)
        direct = photostat.distribution(ref_spec, disp, det)
        scaled = photostat.thin_equivalence(ref_spec, disp, det)
        assert len(direct.probs) == len(scaled.probs)
        assert np.max(np.abs(direct.probs - scaled.probs)) <= 1e-12

    def test_phase_averaged_state_ignores_phi(self):
        spec = BracketSpec(b=1.5, gamma=math.pi)
        a = photostat.distribution(spec, Displacement(mag=1.0, phase=0.0), DetectorModel())
        b = photostat.distribution(spec, Displacement(mag=1.0, phase=1.0), DetectorModel())
        assert np.max(np.abs(a.probs - b.probs)) <= 1e-8

    @pytest.mark.parametrize("phi", [0.0, math.pi / 4, math.pi / 2])
    def test_matches_monte_carlo(self, ref_spec, phi):
        disp = Displacement(mag=2.0, phase=phi)
        n1, _ = simshot.sample_bracket_shots(
            ref_spec, disp, SplitterSpec(tau=0.5, eta1=1.0, eta2=1.0), 1_000_000, MC_SEED,
        )
        model = photostat.distribution(ref_spec, disp, DetectorModel(eta=0.5))
        assert photostat.fidelity(photostat.histogram(n1), model) >= 0.999


class TestHistogram:
    def test_small_sample(self):
        h = photostat.histogram([0, 1, 1, 3])
        assert h.probs.tolist() == [0.25, 0.5, 0.0, 0.25]
        assert h.mean == 1.25
        assert h.variance == pytest.approx(1.1875)
        assert h.cutoff == 3

    def test_empty(self):
        with pytest.raises(DegenerateInputError):
            photostat.histogram([])

    def test_negative_counts(self):
        with pytest.raises(DomainError):
            photostat.histogram([2, -1])


class TestMomentsAndFidelity:
    def test_zero_mean_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            photostat.moments(photostat.histogram([0, 0, 0]))

    def test_zero_mean_fano_property_raises(self):
        with pytest.raises(DegenerateInputError):
            photostat.histogram([0, 0]).fano
        with pytest.raises(DegenerateInputError):
            photostat.phase_mixture(0.0, [0.0], 0.0).fano

    def test_self_fidelity(self, ref_spec, lo):
        dist = photostat.distribution(ref_spec, lo, DetectorModel())
        assert photostat.fidelity(dist, dist) == pytest.approx(1.0, abs=1e-6)

    def test_shorter_sequence_is_zero_padded(self):
        poisson = photostat.phase_mixture(2.0, [0.0], 0.0)
        vacuum = photostat.histogram([0])
        assert photostat.fidelity(vacuum, poisson) == pytest.approx(math.exp(-2.0), rel=1e-12)
        assert photostat.fidelity(poisson, vacuum) == photostat.fidelity(vacuum, poisson)
