"""Pytest configuration and fixtures"""

import os
from typing import Sequence

import numpy as np
import pytest

from src.spectral.grid import GridSpec, SpectralField, TimeGrid

# Keep ensembles inline and logs quiet under test
os.environ.setdefault("RANDWAVE_WORKERS", "1")
os.environ.setdefault("LOG_LEVEL", "WARNING")


@pytest.fixture
def grid8() -> GridSpec:
    return GridSpec(8)


@pytest.fixture
def grid16() -> GridSpec:
    return GridSpec(16)


@pytest.fixture
def grid16_r2() -> GridSpec:
    """Finer lattice: 1/2 spacing, period 4 pi"""
    return GridSpec(16, 2)


@pytest.fixture
def short_time() -> TimeGrid:
    return TimeGrid(0.02, 9)


def low_mode_field(grid: GridSpec, radius: int = 1, amplitude: float = 1.0, seed: int = 0) -> SpectralField:
    """Random coefficients on |m_axis| <= radius, zero elsewhere"""
    rng = np.random.default_rng(seed)
    m = grid.mode_indices
    keep = np.abs(m) <= radius
    mask = keep[:, None, None] & keep[None, :, None] & keep[None, None, :]
    values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralField(grid, np.where(mask, values, 0.0) * amplitude)


def plane_waves(grid: GridSpec, modes: Sequence, amplitude: complex = 1.0) -> SpectralField:
    field = SpectralField.zeros(grid)
    for mode in modes:
        field = field + SpectralField.plane_wave(grid, mode, amplitude)
    return field


@pytest.fixture
def low_field(grid16) -> SpectralField:
    return low_mode_field(grid16, radius=1, amplitude=0.05)


CONFIG_BASE = """\
grid.M = 16
grid.R = 1
time.T = 0.01
time.M_t = 5
randomization.seed = 3
randomization.members = 2
"""


@pytest.fixture
def config_text() -> str:
    """Minimal run configuration without an experiment section"""
    return CONFIG_BASE
