"""
Shared pytest fixtures.

Sweeps are generated once per session; Monte Carlo checks use fixed seeds
so every statistical assertion is reproducible.
"""
from __future__ import annotations

import math

import pytest

from brackets.core.config import settings
from brackets.schemas.simshot import LinearProfile, PiezoProfile, SweepConfig
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import BracketSpec, Displacement
from brackets.services import simshot


@pytest.fixture()
def ref_spec() -> BracketSpec:
    return BracketSpec(b=2.0, gamma=math.pi / 2)


@pytest.fixture()
def lo() -> Displacement:
    return Displacement(mag=2.0, phase=0.0)


@pytest.fixture()
def balanced() -> SplitterSpec:
    return SplitterSpec(tau=0.5, eta1=1.0, eta2=1.0)


@pytest.fixture()
def small_chunks(monkeypatch):
    """Force several random-stream blocks per step."""
    monkeypatch.setattr(settings, "SHOT_CHUNK", 1000)


@pytest.fixture()
def small_sweep_config() -> SweepConfig:
    return SweepConfig(steps=24, shots_per_step=2500, b=1.0, mag=1.0, seed=11)


@pytest.fixture(scope="session")
def clean_sweep() -> simshot.SweepDataset:
    """Noiseless piezo sweep with ideal detectors."""
    config = SweepConfig(
        steps=320, shots_per_step=10_000, b=2.0, mag=2.0, tau=0.5, eta1=1.0, eta2=1.0, seed=2024,
    )
    return simshot.run_sweep(config, workers=4)


@pytest.fixture(scope="session")
def noisy_sweep() -> simshot.SweepDataset:
    """Piezo sweep with 5% shot-energy jitter."""
    config = SweepConfig(
        steps=320, shots_per_step=5_000, b=2.0, mag=2.0, tau=0.5, eta1=1.0, eta2=1.0,
        noise=0.05, phase_profile=PiezoProfile(), seed=77,
    )
    return simshot.run_sweep(config, workers=4)


@pytest.fixture(scope="session")
def uniform_sweep() -> simshot.SweepDataset:
    """Evenly spaced phases over exactly one period."""
    steps = 256
    config = SweepConfig(
        steps=steps, shots_per_step=2_000, b=1.0, mag=1.0, tau=0.5, eta1=0.5, eta2=0.5,
        phase_profile=LinearProfile(start=0.0, stop=2.0 * math.pi * (steps - 1) / steps), seed=5,
    )
    return simshot.run_sweep(config)
