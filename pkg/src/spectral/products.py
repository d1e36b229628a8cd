"""Dealiased pseudospectral products"""

from typing import Callable

import numpy as np
from scipy import fft as sfft

from .grid import FieldTrajectory, GridSpec, SpectralField
from ..utils.errors import GridMismatchError

# Snapshots per padded transform batch; bounds peak memory on trajectories
_BATCH = 8


def _retained_indices(grid: GridSpec):
    """Index arrays of the retained cube in the M grid and in the padded grid"""
    K = grid.retained_radius
    m = np.arange(-K, K + 1)
    return m % grid.M, m % grid.padded_points


def dealiased_product_arrays(
    grid: GridSpec,
    expr: Callable[..., np.ndarray],
    *arrays: np.ndarray,
) -> np.ndarray:
    """
    Evaluate a cubic pointwise expression of spectral arrays without aliasing

    Inputs are truncated to the retained cube |m| <= K, evaluated on a padded
    grid of at least 4K+1 points, and the result is truncated back to the
    retained cube. On retained modes this equals the exact convolution.

    Args:
        grid: Grid shared by all inputs
        expr: Function of physical arrays, at most cubic in its arguments
        *arrays: Spectral arrays of shape (..., M, M, M)

    Returns:
        Spectral array of the product, zero outside the retained cube
    """
    M, P = grid.M, grid.padded_points
    idx_m, idx_p = _retained_indices(grid)
    lead = arrays[0].shape[:-3]
    out = np.zeros(lead + grid.shape, dtype=np.complex128)
    up = (P / M) ** 1.5
    sel_m = np.ix_(idx_m, idx_m, idx_m)
    sel_p = np.ix_(idx_p, idx_p, idx_p)

    flat_inputs = [a.reshape((-1,) + grid.shape) for a in arrays]
    flat_out = out.reshape((-1,) + grid.shape)
    count = flat_out.shape[0]
    for start in range(0, count, _BATCH):
        stop = min(start + _BATCH, count)
        physical = []
        for a in flat_inputs:
            padded = np.zeros((stop - start, P, P, P), dtype=np.complex128)
            padded[(slice(None),) + sel_p] = a[(slice(start, stop),) + sel_m] * up
            physical.append(sfft.ifftn(padded, axes=(-3, -2, -1), norm="ortho"))
        product = sfft.fftn(expr(*physical), axes=(-3, -2, -1), norm="ortho")
        flat_out[(slice(start, stop),) + sel_m] = product[(slice(None),) + sel_p] / up
    return out


def _cubic(a: np.ndarray) -> np.ndarray:
    return a * np.conj(a) * a


def _trilinear(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return a * np.conj(b) * c


def pointwise_cubic(u: SpectralField) -> SpectralField:
    """Spectral representation of |u|^2 u"""
    return SpectralField(u.grid, dealiased_product_arrays(u.grid, _cubic, u.coefficients))


def trilinear_product(u1: SpectralField, u2: SpectralField, u3: SpectralField) -> SpectralField:
    """Spectral representation of u1 * conj(u2) * u3"""
    if not (u1.grid == u2.grid == u3.grid):
        raise GridMismatchError("trilinear_product needs fields on one grid")
    return SpectralField(
        u1.grid,
        dealiased_product_arrays(u1.grid, _trilinear, u1.coefficients, u2.coefficients, u3.coefficients),
    )


def trajectory_product(
    expr: Callable[..., np.ndarray],
    *trajectories: FieldTrajectory,
) -> FieldTrajectory:
    """Node-by-node dealiased product of trajectories"""
    first = trajectories[0]
    for other in trajectories[1:]:
        first.check_compatible(other)
    data = dealiased_product_arrays(first.grid, expr, *(t.data for t in trajectories))
    return FieldTrajectory(first.grid, first.time_grid, data)


def trajectory_trilinear(
    u1: FieldTrajectory, u2: FieldTrajectory, u3: FieldTrajectory
) -> FieldTrajectory:
    """u1 * conj(u2) * u3 at every time node"""
    return trajectory_product(_trilinear, u1, u2, u3)


def trajectory_cubic(u: FieldTrajectory) -> FieldTrajectory:
    """|u|^2 u at every time node"""
    return trajectory_product(_cubic, u)


def truncate_to_retained(f: SpectralField) -> SpectralField:
    """Zero every mode outside the dealiased cube"""
    return SpectralField(f.grid, np.where(f.grid.retained_mask, f.coefficients, 0.0))
