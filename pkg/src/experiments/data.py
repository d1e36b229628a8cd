"""Deterministic initial data for the experiments"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..spectral.grid import GridSpec, SpectralField, forward_transform
from ..spectral.norms import ETA_OUTER, dyadic_scales, from_density, lp_symbol, sobolev_norm

logger = logging.getLogger(__name__)


CALIBRATION_SWEEPS = 40


def power_profile_data(
    grid: GridSpec,
    s: float,
    delta: float = 0.01,
    amplitude: Optional[float] = None,
) -> SpectralField:
    """
    Data with ||P_N phi||_{L^2} proportional to N^(-s-delta), filling every retained mode

    The density is <xi>^(-3/2) reweighted block by block. Blocks that fit
    inside the retained cube (8N/5 <= K/R) are calibrated to the power law
    exactly; blocks reaching past it continue the law from the block below.

    Args:
        grid: Target grid
        s: Regularity exponent
        delta: Extra decay so that phi sits just inside H^s
        amplitude: When given, phi is rescaled to ||phi||_{H^s} = amplitude

    Returns:
        Field supported on the dealiased cube
    """
    base = np.where(grid.retained_mask, grid.japanese_bracket ** -1.5, 0.0)
    scales = dyadic_scales(grid)
    symbols = np.stack([lp_symbol(grid, N) for N in scales])
    edge = grid.retained_radius / grid.R
    decay = -(s + delta)
    weights = np.ones(len(scales))
    for _ in range(CALIBRATION_SWEEPS):
        for j, (N, symbol) in enumerate(zip(scales, symbols)):
            if j > 0 and ETA_OUTER * N > edge:
                weights[j] = weights[j - 1] * 2.0 ** decay
                continue
            density = base * np.tensordot(weights, symbols, axes=1)
            weights[j] *= N ** decay / math.sqrt(float(np.sum((symbol * density) ** 2)))
    density = base * np.tensordot(weights, symbols, axes=1)
    phi = from_density(grid, density)
    if amplitude is not None:
        phi = phi * (amplitude / sobolev_norm(phi, s))
    return phi


def box_mask(grid: GridSpec, center: Sequence[float], lam: float) -> np.ndarray:
    """Lattice points of center + lam * (-1/2, 1/2]^3"""
    kx, ky, kz = grid.frequencies
    half = lam / 2.0
    tol = 1e-9 / grid.R
    inside = [
        (k - c > -half + tol) & (k - c <= half + tol)
        for k, c in zip((kx, ky, kz), center)
    ]
    return inside[0] & inside[1] & inside[2]


def box_indicator(
    grid: GridSpec,
    center: Sequence[float],
    lam: float,
    amplitude: float = 1.0,
) -> SpectralField:
    """Field with Fourier density ``amplitude`` on the box center + lam Q"""
    return from_density(grid, amplitude * box_mask(grid, center, lam).astype(float))


def gaussian_bump(grid: GridSpec, width: float, amplitude: float = 1.0) -> SpectralField:
    """amplitude * exp(-|x|^2 / (2 width^2)) centered at the origin of the box"""
    x, y, z = grid.centered_coordinates()
    samples = amplitude * np.exp(-(x ** 2 + y ** 2 + z ** 2) / (2.0 * width ** 2))
    return forward_transform(samples, grid)


def tube_data(grid: GridSpec, n_low: int, n_high: int) -> SpectralField:
    """
    Density on a tube of cross-section n_low around the e1 axis at height n_high

    Paired with a ball of radius n_low this concentrates the bilinear interaction.
    """
    kx, ky, kz = grid.frequencies
    tube = (np.abs(kx - n_high) <= n_high / 4.0) & (np.abs(ky) <= n_low / 2.0) & (np.abs(kz) <= n_low / 2.0)
    return from_density(grid, np.where(grid.retained_mask & tube, 1.0, 0.0))


def ball_data(grid: GridSpec, radius: float) -> SpectralField:
    """Unit density on |xi| <= radius"""
    return from_density(grid, np.where(grid.retained_mask & (grid.frequency_modulus <= radius), 1.0, 0.0))
