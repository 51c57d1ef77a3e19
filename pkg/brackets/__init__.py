"""Simulation and analysis toolkit for bracket states of light."""

__version__ = "1.0.0"
