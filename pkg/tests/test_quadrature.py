"""
Tests for the psi-average quadrature.
"""
import logging
import math

import numpy as np
import pytest

from brackets.core.config import settings
from brackets.services.quadrature import legendre_rule, phase_average


class TestPhaseAverage:
    def test_zero_spread_evaluates_at_origin(self):
        assert phase_average(lambda psi: np.cos(psi) + 2.0, 0.0, 1.0) == 3.0

    @pytest.mark.parametrize("gamma", [0.1, 1.0, math.pi])
    def test_cosine_mean_is_sinc(self, gamma):
        got = phase_average(np.cos, gamma, 1.0)
        assert got == pytest.approx(math.sin(gamma / 2) / (gamma / 2), abs=1e-13)

    def test_vector_valued_integrand(self):
        k = np.arange(1, 4)
        got = phase_average(lambda psi: np.cos(psi[:, None] * k), math.pi, 1.0)
        expected = np.sin(k * math.pi / 2) / (k * math.pi / 2)
        assert np.allclose(got, expected, atol=1e-13)

    def test_unconverged_integrand_logs_warning(self, monkeypatch, caplog):
        monkeypatch.setattr(settings, "QUAD_MAX_NODES", 64)
        monkeypatch.setattr(logging.getLogger("brackets"), "propagate", True)
        # Noise-like integrand never settles between successive rules.
        phase_average(lambda psi: np.sign(np.sin(500.0 * psi)), math.pi, 1.0)
        assert "not converged" in caplog.text

    def test_rules_are_cached_and_read_only(self):
        x, w = legendre_rule(16)
        assert legendre_rule(16)[0] is x
        assert w.sum() == pytest.approx(2.0)
        with pytest.raises(ValueError):
            x[0] = 0.0
