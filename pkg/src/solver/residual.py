"""Plug-back residual of the cubic equation on a trajectory"""

import math

import numpy as np

from ..evolution.propagator import phase_multipliers
from ..spectral.grid import FieldTrajectory, TimeGrid
from ..spectral.products import dealiased_product_arrays


def _residual_arrays(u: FieldTrajectory, nonlinear: bool) -> np.ndarray:
    tg, grid = u.time_grid, u.grid
    if tg.nodes < 3:
        raise ValueError(f"centered differencing needs at least 3 nodes, got {tg.nodes}")

    pulled_back = phase_multipliers(grid, tg.times, sign=1.0) * u.data
    derivative = (pulled_back[2:] - pulled_back[:-2]) / (2.0 * tg.dt)
    interior = phase_multipliers(grid, tg.times[1:-1]) * derivative
    residual = 1j * interior
    if nonlinear:
        residual -= dealiased_product_arrays(grid, lambda a: a * np.conj(a) * a, u.data[1:-1])
    return residual


def _node_norms(u: FieldTrajectory, arrays: np.ndarray, sigma: float) -> np.ndarray:
    weight = u.grid.japanese_bracket ** (2.0 * sigma)
    sums = np.sum(weight * np.abs(arrays) ** 2, axis=(-3, -2, -1)) * u.grid.cell_volume
    return np.sqrt(sums)


def residual_profile(u: FieldTrajectory, nonlinear: bool = True, sigma: float = -1.0) -> np.ndarray:
    """
    H^sigma norm of i u_t + Laplacian u - |u|^2 u at every interior node

    The time derivative is taken in the interaction picture,
    i u_t + Laplacian u = i S(t) d/dt [S(-t) u], with centered differences,
    so free solutions leave no differencing error.

    Args:
        u: Trajectory with at least 3 nodes
        nonlinear: False drops the cubic term
        sigma: Sobolev index of the residual norm

    Returns:
        Array of length M_t - 2
    """
    return _node_norms(u, _residual_arrays(u, nonlinear), sigma)


def nls_residual(u: FieldTrajectory, nonlinear: bool = True, sigma: float = -1.0) -> float:
    """Sup over interior nodes of the H^-1 plug-back residual"""
    return float(residual_profile(u, nonlinear, sigma).max())


def discretization_floor(u: FieldTrajectory, nonlinear: bool = True, sigma: float = -1.0) -> float:
    """
    Estimated dt^2 differencing error inside nls_residual

    The residual is recomputed on every other node. Centered differences err
    by c dt^2, so at the shared nodes (coarse - fine) / 3 isolates that error.
    NaN when M_t - 1 is odd or below 4.
    """
    tg = u.time_grid
    if tg.nodes < 5 or (tg.nodes - 1) % 2:
        return math.nan
    coarse_grid = TimeGrid(tg.horizon, (tg.nodes - 1) // 2 + 1)
    coarse = _residual_arrays(FieldTrajectory(u.grid, coarse_grid, u.data[::2]), nonlinear)
    # coarse interior node j sits at fine interior index 2j + 1
    fine = _residual_arrays(u, nonlinear)[1::2][: coarse.shape[0]]
    return float(_node_norms(u, (coarse - fine) / 3.0, sigma).max())
