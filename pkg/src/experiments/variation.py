"""Computable stand-ins for the adapted-space norms of trajectories"""

from typing import Optional

import numpy as np

from ..evolution.propagator import phase_multipliers
from ..spectral.grid import FieldTrajectory
from ..spectral.norms import sobolev_norm
from ..utils.errors import HorizonError


def _nodes_up_to(traj: FieldTrajectory, T: float) -> int:
    if T > traj.time_grid.horizon * (1.0 + 1e-12):
        raise HorizonError(f"T={T} exceeds trajectory horizon {traj.time_grid.horizon}")
    return traj.time_grid.node_at_or_before(T) + 1


def xnorm_proxy(traj: FieldTrajectory, sigma: float, T: float) -> float:
    """
    max over nodes t_m <= T of ||u(t_m)||_{H^sigma}

    A lower bound for the adapted X^sigma norm on [0, T], which embeds in
    C([0, T]; H^sigma).
    """
    count = _nodes_up_to(traj, T)
    return max(sobolev_norm(traj.snapshot(m), sigma) for m in range(count))


def _pairwise_distances(values: np.ndarray, weight: np.ndarray, cell: float) -> np.ndarray:
    """Weighted L^2 distances between all snapshot pairs via the Gram matrix"""
    flat = (values * np.sqrt(weight)).reshape(values.shape[0], -1)
    gram = (flat @ flat.conj().T).real * cell
    diag = np.diag(gram)
    squared = diag[:, None] + diag[None, :] - 2.0 * gram
    return np.sqrt(np.clip(squared, 0.0, None))


def discrete_variation_norm(
    traj: FieldTrajectory,
    p: float = 2.0,
    twisted: bool = False,
    sigma: float = 0.0,
    count: Optional[int] = None,
) -> float:
    """
    p-variation of the sampled trajectory in H^sigma

    The supremum over partitions runs over subsets of the time nodes, found
    exactly by dynamic programming over the last partition point; the value
    is a lower bound of the continuous-time seminorm. twisted measures
    S(-t) u(t) instead of u(t).

    Args:
        traj: Trajectory
        p: Variation exponent, >= 1
        twisted: Pull the trajectory back by the free flow
        sigma: Sobolev index of the increments
        count: Use only the first ``count`` nodes

    Returns:
        sup over t_0 < ... < t_K of (sum_j ||u(t_{j+1}) - u(t_j)||^p)^(1/p)
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    count = traj.time_grid.nodes if count is None else count
    grid = traj.grid
    values = traj.data[:count]
    if twisted:
        values = phase_multipliers(grid, traj.time_grid.times[:count], sign=1.0) * values

    dist = _pairwise_distances(values, grid.japanese_bracket ** (2.0 * sigma), grid.cell_volume) ** p
    best = np.zeros(count)
    for j in range(1, count):
        best[j] = float(np.max(best[:j] + dist[:j, j]))
    return float(best.max()) ** (1.0 / p)


def xnorm_upper_surrogate(traj: FieldTrajectory, sigma: float, T: float) -> float:
    """||u(0)||_{H^sigma} plus the twisted 2-variation in H^sigma on [0, T]; never below xnorm_proxy"""
    count = _nodes_up_to(traj, T)
    variation = discrete_variation_norm(traj, 2.0, twisted=True, sigma=sigma, count=count)
    return sobolev_norm(traj.snapshot(0), sigma) + variation
