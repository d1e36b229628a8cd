"""Free Schrodinger propagator S(t) = exp(it Laplacian)"""

import logging
from typing import Dict

import numpy as np

from ..spectral.grid import FieldTrajectory, GridSpec, SpectralField, TimeGrid

logger = logging.getLogger(__name__)


class PropagatorCache:
    """Per-grid table of read-only multipliers exp(-i tau |xi|^2)"""

    def __init__(self, grid: GridSpec, max_entries: int = 64):
        self.grid = grid
        self.max_entries = max_entries
        self._table: Dict[float, np.ndarray] = {}

    def multiplier(self, tau: float) -> np.ndarray:
        key = float(tau)
        table = self._table.get(key)
        if table is None:
            table = np.exp(-1j * key * self.grid.frequency_squared)
            table.setflags(write=False)
            if len(self._table) >= self.max_entries:
                self._table.pop(next(iter(self._table)))
            self._table[key] = table
        return table

    def clear(self):
        self._table.clear()

    def __len__(self) -> int:
        return len(self._table)


def phase_multipliers(grid: GridSpec, times: np.ndarray, sign: float = -1.0) -> np.ndarray:
    """exp(sign * i t |xi|^2) for every t, shape (len(times), M, M, M)"""
    t = np.asarray(times, dtype=float)[:, None, None, None]
    return np.exp(sign * 1j * t * grid.frequency_squared)


def evolve_linear(f: SpectralField, t: float) -> SpectralField:
    """S(t)f: coefficientwise multiplication by exp(-it|xi|^2)"""
    if t == 0:
        return f
    return SpectralField(f.grid, f.coefficients * np.exp(-1j * t * f.grid.frequency_squared))


def free_trajectory(f: SpectralField, time_grid: TimeGrid) -> FieldTrajectory:
    """S(t)f sampled at every node of the time grid"""
    data = phase_multipliers(f.grid, time_grid.times) * f.coefficients
    return FieldTrajectory(f.grid, time_grid, data)
