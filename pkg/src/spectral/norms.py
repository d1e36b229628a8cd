"""Littlewood-Paley projections, Sobolev and space-time norms, scaling and energy"""

import logging
import math
from typing import Dict, List

import numpy as np
from scipy.integrate import trapezoid

from .grid import DyadicProfile, FieldTrajectory, GridSpec, SpectralField, inverse_transform
from ..utils.errors import HorizonError, TruncationError

logger = logging.getLogger(__name__)

# eta == 1 on [0, ETA_INNER], eta == 0 on [ETA_OUTER, inf)
ETA_INNER = 5.0 / 4.0
ETA_OUTER = 8.0 / 5.0


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1"""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def eta(r: np.ndarray) -> np.ndarray:
    """Even smooth cutoff: 1 on |r| <= 5/4, 0 on |r| >= 8/5"""
    r = np.abs(np.asarray(r, dtype=float))
    return _smooth_step((ETA_OUTER - r) / (ETA_OUTER - ETA_INNER))


def _check_dyadic(N: int):
    if N < 1 or (int(N) & (int(N) - 1)) != 0:
        raise ValueError(f"dyadic scale must be a power of two >= 1, got {N}")


def lp_symbol(grid: GridSpec, N: int) -> np.ndarray:
    """Symbol eta_N on the lattice; eta_1 = eta(|xi|)"""
    _check_dyadic(N)
    r = grid.frequency_modulus
    if N == 1:
        return eta(r)
    return eta(r / N) - eta(2.0 * r / N)


def dyadic_scales(grid: GridSpec) -> List[int]:
    """Dyadic N = 1, 2, ... until the blocks cover every lattice frequency"""
    scales = [1]
    while ETA_INNER * scales[-1] < grid.max_frequency:
        scales.append(scales[-1] * 2)
    return scales


def littlewood_paley(f: SpectralField, N: int) -> SpectralField:
    """P_N f"""
    return SpectralField(f.grid, f.coefficients * lp_symbol(f.grid, N))


def _weighted_sum(f: SpectralField, weight: np.ndarray) -> float:
    return float(np.sum(weight * np.abs(f.coefficients) ** 2) * f.grid.cell_volume)


def sobolev_norm(f: SpectralField, s: float) -> float:
    """
    Inhomogeneous Sobolev norm with weight <xi>^s

    Args:
        f: Field
        s: Regularity index

    Returns:
        (sum_xi <xi>^(2s) |f_hat|^2 * cell volume)^(1/2)
    """
    if not math.isfinite(s):
        raise ValueError(f"Sobolev index must be finite, got {s}")
    return math.sqrt(_weighted_sum(f, f.grid.japanese_bracket ** (2.0 * s)))


def homogeneous_norm(f: SpectralField, s: float) -> float:
    """Homogeneous norm with weight |xi|^s; s < 0 requires a mean-zero field"""
    r = f.grid.frequency_modulus
    if s < 0:
        if abs(f.coefficients[0, 0, 0]) > 0:
            raise ValueError("homogeneous norm with s < 0 is undefined for a field with nonzero mean")
        weight = np.where(r > 0, np.where(r > 0, r, 1.0) ** (2.0 * s), 0.0)
    else:
        weight = r ** (2.0 * s)
    return math.sqrt(_weighted_sum(f, weight))


def l2_norm(f: SpectralField) -> float:
    return sobolev_norm(f, 0.0)


def mass(f: SpectralField) -> float:
    """||f||_{L^2}^2"""
    return l2_norm(f) ** 2


def lebesgue_norm(physical: np.ndarray, grid: GridSpec, r: float) -> float:
    """||u||_{L^r} of physical samples; r = inf is the grid maximum"""
    values = np.abs(physical)
    if math.isinf(r):
        return float(values.max())
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return float((np.sum(values ** r) * grid.cell_volume) ** (1.0 / r))


def sup_norm(f: SpectralField) -> float:
    return lebesgue_norm(inverse_transform(f), f.grid, math.inf)


def spatial_norms(traj: FieldTrajectory, r: float, count: int) -> np.ndarray:
    """L^r_x norm of the first ``count`` snapshots"""
    return np.array([
        lebesgue_norm(inverse_transform(traj.snapshot(m)), traj.grid, r) for m in range(count)
    ])


def spacetime_norm(traj: FieldTrajectory, q: float, r: float, T: float) -> float:
    """
    L^q_T L^r_x norm on [0, T] with trapezoid time quadrature

    Args:
        traj: Trajectory sampled on a uniform time grid
        q: Time exponent (>= 1, inf allowed)
        r: Space exponent (>= 1, inf allowed)
        T: Upper time limit, at most the trajectory horizon

    Returns:
        Nonnegative norm; an intermediate T interpolates the integrand linearly
    """
    tg = traj.time_grid
    if T > tg.horizon * (1.0 + 1e-12):
        raise HorizonError(f"T={T} exceeds trajectory horizon {tg.horizon}")
    if q < 1 or r < 1:
        raise ValueError(f"exponents must be >= 1, got q={q}, r={r}")
    T = min(T, tg.horizon)
    last = tg.node_at_or_before(T)
    need = min(last + 2, tg.nodes)
    norms = spatial_norms(traj, r, need)
    t = tg.times[:need]

    if math.isinf(q):
        value = norms[: last + 1].max()
        if need > last + 1 and T > t[last]:
            w = (T - t[last]) / tg.dt
            value = max(value, (1 - w) * norms[last] + w * norms[last + 1])
        return float(value)

    integrand = norms ** q
    total = float(trapezoid(integrand[: last + 1], t[: last + 1])) if last > 0 else 0.0
    if need > last + 1 and T > t[last]:
        w = (T - t[last]) / tg.dt
        at_T = (1 - w) * integrand[last] + w * integrand[last + 1]
        total += 0.5 * (integrand[last] + at_T) * (T - t[last])
    return total ** (1.0 / q)


def dyadic_profile(f: SpectralField, sigma: float = 0.0) -> DyadicProfile:
    """Block norms ||P_N f||_{H^sigma} for every dyadic N up to the lattice edge"""
    weight = f.grid.japanese_bracket ** (2.0 * sigma)
    values: Dict[int, float] = {}
    for N in dyadic_scales(f.grid):
        block = f.coefficients * lp_symbol(f.grid, N)
        values[N] = math.sqrt(float(np.sum(weight * np.abs(block) ** 2) * f.grid.cell_volume))
    return DyadicProfile(values)


def scaling_transform(f: SpectralField, lam: float) -> SpectralField:
    """
    Lattice version of u(x) -> lam * u(lam x)

    Coefficients move from xi to lam*xi with amplitude lam^(-1/2): the R^3
    factor lam^(-2) times the density factor lam^(3/2) of the sublattice the
    dilated spectrum occupies. L^2 scales by lam^(-1/2), H-dot^(1/2) is invariant.

    Args:
        f: Field whose support maps onto representable modes
        lam: Power of two (negative exponents allowed)

    Returns:
        Dilated field

    Raises:
        TruncationError: if a dilated mode leaves the lattice
    """
    exponent = math.log2(lam) if lam > 0 else float("nan")
    if not math.isfinite(exponent) or abs(exponent - round(exponent)) > 1e-12:
        raise ValueError(f"scaling factor must be a power of two, got {lam}")
    exponent = int(round(exponent))
    if exponent == 0:
        return f

    grid = f.grid
    m = grid.mode_indices
    nz = np.nonzero(f.coefficients)
    modes = [m[axis_idx] for axis_idx in nz]
    if exponent > 0:
        factor = 2 ** exponent
        new_modes = [mi * factor for mi in modes]
    else:
        divisor = 2 ** (-exponent)
        if any(np.any(mi % divisor) for mi in modes):
            raise TruncationError(f"support not divisible by {divisor}; dilation by {lam} leaves the lattice")
        new_modes = [mi // divisor for mi in modes]

    half = grid.M // 2
    for mi in new_modes:
        if mi.size and (mi.min() < -half or mi.max() >= half):
            raise TruncationError(f"dilation by {lam} pushes support beyond the M={grid.M} lattice")

    out = np.zeros(grid.shape, dtype=np.complex128)
    out[tuple(mi % grid.M for mi in new_modes)] = f.coefficients[nz] * lam ** -0.5
    return SpectralField(grid, out)


def energy(f: SpectralField) -> float:
    """E(v) = 1/2 int |grad v|^2 + 1/4 int |v|^4"""
    kinetic = 0.5 * _weighted_sum(f, f.grid.frequency_squared)
    potential = 0.25 * float(np.sum(np.abs(inverse_transform(f)) ** 4) * f.grid.cell_volume)
    return kinetic + potential


def from_density(grid: GridSpec, density: np.ndarray) -> SpectralField:
    """Field whose R^3 Fourier density at each lattice frequency is ``density``"""
    return SpectralField(grid, np.asarray(density) * grid.M ** 1.5 / grid.box_volume)


def to_density(f: SpectralField) -> np.ndarray:
    """R^3 Fourier density of a box field at the lattice frequencies"""
    return f.coefficients * f.grid.box_volume / f.grid.M ** 1.5
