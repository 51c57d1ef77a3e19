"""
Tests for beam-splitter intensity correlations.

Covered:
  - balanced splitter reduces to (F-1)/(F+1), bit for bit
  - thinned form agrees with the textbook form at unit efficiency
  - detected Fano factor limits
  - phase curves: flat for the phase-averaged state, reference value at phi = 0
  - bounds 0 <= Gamma < 1 and rejection of sub-Poissonian inputs
  - simulated Fano factors and correlations across phase, spread and
    efficiency; detected Fano factor under binomial thinning
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from brackets.core.errors import DomainError
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import BracketSpec, Displacement
from brackets.services import simshot, splitter, states
from tests.helpers import MC_SEED

F_REF = 5.0 + 8.0 / math.pi


class TestGammaCoeff:
    def test_balanced_identity_is_exact(self):
        for f in np.linspace(1.0, 100.0, 1001):
            assert splitter.gamma_coeff(float(f), 0.5) == splitter.gamma_balanced(float(f))

    def test_reference_value(self):
        assert splitter.gamma_balanced(F_REF) == pytest.approx(0.765985, abs=1e-6)

    def test_poissonian_input_is_uncorrelated(self):
        assert splitter.gamma_coeff(1.0, 0.3) == 0.0

    @pytest.mark.parametrize("tau", [0.1, 0.5, 0.77])
    def test_thinned_agrees_at_unit_efficiency(self, tau):
        assert splitter.gamma_thinned(F_REF, tau, 1.0 - tau) == pytest.approx(
            splitter.gamma_coeff(F_REF, tau), rel=1e-12,
        )

    def test_lossy_detection_weakens_correlation(self):
        assert splitter.gamma_thinned(F_REF, 0.25, 0.25) < splitter.gamma_balanced(F_REF)

    def test_dead_arm(self):
        assert splitter.gamma_thinned(F_REF, 0.5, 0.0) == 0.0

    @pytest.mark.parametrize("tau", [0.0, 1.0, -0.2])
    def test_tau_open_interval(self, tau):
        with pytest.raises(DomainError) as exc:
            splitter.gamma_coeff(2.0, tau)
        assert exc.value.details["field"] == "tau"

    def test_sub_poissonian_rejected(self):
        with pytest.raises(DomainError) as exc:
            splitter.gamma_balanced(0.5)
        assert exc.value.details["field"] == "fano"

    def test_thinning_out_of_range(self):
        with pytest.raises(DomainError):
            splitter.gamma_thinned(2.0, 1.5, 0.5)

    @hsettings(max_examples=300, deadline=None)
    @given(f=st.floats(1.0, 1e6), tau=st.floats(0.01, 0.99))
    def test_bounded(self, f, tau):
        g = splitter.gamma_coeff(f, tau)
        assert 0.0 <= g < 1.0


class TestDetectedFano:
    def test_limits(self):
        assert splitter.detected_fano(F_REF, 1.0) == F_REF
        assert splitter.detected_fano(F_REF, 0.0) == 1.0

    def test_half(self):
        assert splitter.detected_fano(5.0, 0.5) == 3.0


class TestPhaseCurves:
    def test_phase_averaged_curves_are_flat(self, balanced):
        spec = BracketSpec(b=2.0, gamma=math.pi)
        rows = splitter.phase_curves(spec, 2.0, balanced, np.linspace(0.0, 2.0 * math.pi, 17))
        assert {round(r.fano_detected, 12) for r in rows} == {3.0}
        assert all(r.gamma == pytest.approx(2.0 / 3.0, abs=1e-12) for r in rows)

    def test_reference_row(self, ref_spec, balanced):
        (row,) = splitter.phase_curves(ref_spec, 2.0, balanced, [0.0])
        f = states.fano(ref_spec, Displacement(mag=2.0, phase=0.0))
        assert row.fano_detected == pytest.approx(splitter.detected_fano(f, 0.5))
        assert row.gamma == pytest.approx(0.765985, abs=1e-6)

    def test_extremes_at_zero_and_half_pi(self, ref_spec):
        split = SplitterSpec(tau=0.5, eta1=0.8, eta2=0.8)
        phis = np.linspace(0.0, math.pi, 65)
        gammas = [r.gamma for r in splitter.phase_curves(ref_spec, 2.0, split, phis)]
        assert int(np.argmax(gammas)) in (0, 64)
        assert int(np.argmin(gammas)) == 32


class TestMonteCarloAgreement:
    """Analytic curves against simulated counts, 5 batch standard errors."""

    @pytest.mark.parametrize("gamma", [0.05, math.pi / 2, 3.0 * math.pi / 4, math.pi])
    def test_phase_curves(self, gamma):
        spec = BracketSpec(b=2.0, gamma=gamma)
        split = SplitterSpec(tau=0.5, eta1=0.5, eta2=0.5)
        phis = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        rows = splitter.phase_curves(spec, 2.0, split, phis)
        if gamma == math.pi:
            assert max(r.fano_detected for r in rows) - min(r.fano_detected for r in rows) <= 1e-12
            assert max(r.gamma for r in rows) - min(r.gamma for r in rows) <= 1e-12

        for k, row in enumerate(rows):
            n1, n2 = simshot.sample_bracket_shots(
                spec, Displacement(mag=2.0, phase=row.phi), split, 100_000, MC_SEED + k,
            )
            fano, fano_err = simshot.batch_stderr(n1, simshot.sample_fano)
            corr, corr_err = simshot.batch_stderr(np.column_stack([n1, n2]), simshot.sample_correlation)
            assert abs(fano - row.fano_detected) <= 5.0 * fano_err, f"phi={row.phi}"
            assert abs(corr - row.gamma) <= 5.0 * corr_err, f"phi={row.phi}"

    def test_randomized_correlation(self):
        rng = np.random.default_rng(MC_SEED)
        for k in range(10):
            b, mag, gamma, phi, tau, eta1, eta2 = rng.uniform(
                [0.5, 0.5, 0.0, 0.0, 0.2, 0.3, 0.3], [2.5, 2.5, math.pi, 2.0 * math.pi, 0.8, 1.0, 1.0],
            )
            spec = BracketSpec(b=b, gamma=gamma)
            disp = Displacement(mag=mag, phase=phi)
            split = SplitterSpec(tau=tau, eta1=eta1, eta2=eta2)
            n1, n2 = simshot.sample_bracket_shots(spec, disp, split, 1_000_000, MC_SEED + 100 + k)
            corr, err = simshot.batch_stderr(np.column_stack([n1, n2]), simshot.sample_correlation)
            expected = splitter.gamma_thinned(states.fano(spec, disp), split.t1, split.t2)
            assert abs(corr - expected) <= 5.0 * err, f"tuple {k}"

    @pytest.mark.parametrize("eta", [0.3, 0.5])
    def test_binomial_thinning(self, ref_spec, lo, eta):
        # n1 + n2 of a lossless balanced split is the undetected photon number.
        n1, n2 = simshot.sample_bracket_shots(ref_spec, lo, SplitterSpec(), 10_000_000, MC_SEED + 7)
        total = n1 + n2
        del n1, n2
        kept = np.random.default_rng(MC_SEED + 8).binomial(total, eta)
        del total
        fano, err = simshot.batch_stderr(kept, simshot.sample_fano)
        expected = splitter.detected_fano(states.fano(ref_spec, lo), eta)
        assert abs(fano - expected) <= 5.0 * err
