"""Duhamel integrals in the interaction picture and the resonance phase"""

import logging
import math
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .propagator import phase_multipliers
from ..spectral.grid import FieldTrajectory, TimeGrid
from ..spectral.products import trajectory_trilinear
from ..utils.errors import GridMismatchError, InvalidQuadrupleError

logger = logging.getLogger(__name__)


class Quadrature(str, Enum):
    TRAPEZOID = "trapezoid"
    GAUSS_LEGENDRE = "gauss-legendre"


def _as_vector(xi: Sequence[float]) -> np.ndarray:
    v = np.asarray(xi, dtype=float)
    if v.shape != (3,):
        raise InvalidQuadrupleError(f"frequencies must be 3-vectors, got shape {v.shape}")
    return v


def phase_function(xi, xi1, xi2, xi3, atol: float = 1e-9) -> float:
    """
    Resonance modulation |xi|^2 - |xi1|^2 + |xi2|^2 - |xi3|^2

    Raises:
        InvalidQuadrupleError: if xi != xi1 - xi2 + xi3
    """
    xi, xi1, xi2, xi3 = (_as_vector(v) for v in (xi, xi1, xi2, xi3))
    if not np.allclose(xi, xi1 - xi2 + xi3, rtol=0.0, atol=atol):
        raise InvalidQuadrupleError(f"{xi.tolist()} != xi1 - xi2 + xi3")
    return float(xi @ xi - xi1 @ xi1 + xi2 @ xi2 - xi3 @ xi3)


def phase_function_factored(xi, xi1, xi2, xi3, atol: float = 1e-9) -> float:
    """Same modulation as 2 <xi - xi1, xi - xi3>"""
    xi, xi1, xi2, xi3 = (_as_vector(v) for v in (xi, xi1, xi2, xi3))
    if not np.allclose(xi, xi1 - xi2 + xi3, rtol=0.0, atol=atol):
        raise InvalidQuadrupleError(f"{xi.tolist()} != xi1 - xi2 + xi3")
    return float(2.0 * (xi - xi1) @ (xi - xi3))


@lru_cache(maxsize=None)
def _gauss_cubic_weights() -> np.ndarray:
    """
    Weights W[p, j]: two-point Gauss rule on [p, p+1] applied to the cubic
    through nodes 0..3, as a combination of the four nodal values
    """
    nodes = np.arange(4.0)
    half = 0.5 / math.sqrt(3.0)
    weights = np.zeros((3, 4))
    for p in range(3):
        for s in (p + 0.5 - half, p + 0.5 + half):
            for j in range(4):
                others = nodes[nodes != j]
                weights[p, j] += 0.5 * np.prod((s - others) / (nodes[j] - others))
    return weights


def _interval_increments(integrand: np.ndarray, dt: float, quadrature: Quadrature) -> np.ndarray:
    """Integral of the integrand over each [t_(m-1), t_m], shape (M_t - 1, ...)"""
    if quadrature is Quadrature.TRAPEZOID:
        return 0.5 * dt * (integrand[:-1] + integrand[1:])

    count = integrand.shape[0]
    if count < 4:
        raise ValueError(f"gauss-legendre quadrature needs at least 4 time nodes, got {count}")
    weights = _gauss_cubic_weights()
    increments = np.empty((count - 1,) + integrand.shape[1:], dtype=np.complex128)
    for i in range(count - 1):
        start = min(max(i - 1, 0), count - 4)
        w = weights[i - start]
        increments[i] = dt * (
            w[0] * integrand[start] + w[1] * integrand[start + 1]
            + w[2] * integrand[start + 2] + w[3] * integrand[start + 3]
        )
    return increments


def duhamel_integral(
    forcing: FieldTrajectory,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> FieldTrajectory:
    """
    -i int_0^t S(t - t') F(t') dt' on the forcing's time grid

    The interaction-picture integrand S(-t')F(t') is accumulated interval by
    interval and mapped back with S(t_m), so the cost is linear in the
    number of nodes.

    Args:
        forcing: F sampled on a uniform time grid
        quadrature: Per-interval rule

    Returns:
        Trajectory vanishing at t = 0
    """
    quadrature = Quadrature(quadrature)
    grid, tg = forcing.grid, forcing.time_grid
    integrand = phase_multipliers(grid, tg.times, sign=1.0) * forcing.data
    accumulated = np.zeros_like(integrand)
    np.cumsum(_interval_increments(integrand, tg.dt, quadrature), axis=0, out=accumulated[1:])
    data = -1j * phase_multipliers(grid, tg.times) * accumulated
    return FieldTrajectory(grid, tg, data)


def duhamel_trilinear(
    u1: FieldTrajectory,
    u2: FieldTrajectory,
    u3: FieldTrajectory,
    time_grid: Optional[TimeGrid] = None,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> FieldTrajectory:
    """
    I(u1, u2, u3)(t) = -i int_0^t S(t - t') (u1 conj(u2) u3)(t') dt'

    The second slot is always conjugated.
    """
    if time_grid is not None and time_grid != u1.time_grid:
        raise GridMismatchError(f"time grid {time_grid} differs from the trajectories' {u1.time_grid}")
    return duhamel_integral(trajectory_trilinear(u1, u2, u3), quadrature)
