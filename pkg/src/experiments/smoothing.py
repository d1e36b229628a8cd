"""Dyadic smoothing rates of the expansion terms"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .ensemble import ensemble_map, quartiles
from .fitting import FitResult, fit_loglog
from ..evolution.duhamel import Quadrature
from ..evolution.propagator import evolve_linear, free_trajectory
from ..expansion.alpha import alpha
from ..expansion.towers import build_zeta_terms
from ..randomization.windows import WindowSpec
from ..randomization.wiener import EnsembleSpec
from ..spectral.grid import SpectralField, TimeGrid
from ..spectral.norms import dyadic_profile
from ..utils.parallel import pairwise_mean

logger = logging.getLogger(__name__)


@dataclass
class SmoothingResult:
    order: int
    s: float
    delta: float
    scales: np.ndarray
    quartiles: np.ndarray
    fit: FitResult
    predicted_slope: float
    tolerance: float
    passed: bool
    mean: Optional[np.ndarray] = None
    settings: Dict[str, Any] = field(default_factory=dict)

    columns = ("N", "q25", "median", "q75", "mean")

    def rows(self) -> List[Tuple[float, ...]]:
        mean = self.quartiles[1] if self.mean is None else self.mean
        return [
            (float(n), float(lo), float(mid), float(hi), float(m))
            for n, lo, mid, hi, m in zip(self.scales, *self.quartiles, mean)
        ]

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": "smooth-fit",
            "order": self.order,
            "s": self.s,
            "delta": self.delta,
            "fit": self.fit.to_dict(),
            "predicted_slope": self.predicted_slope,
            "tolerance": self.tolerance,
            "passed": self.passed,
            **self.settings,
        }


def predicted_profile_slope(order: int, s: float, delta: float = 0.0) -> float:
    """Expected dyadic L^2 slope of the order-(2k-1) term: -(s + delta) for k = 1, -alpha_k s beyond"""
    if order == 1:
        return -(s + delta)
    return -float(alpha((order + 1) // 2)) * s


def _member_profile(
    phi_omega: SpectralField,
    time_grid: TimeGrid,
    order: int,
    quadrature: Quadrature,
) -> np.ndarray:
    if order == 1:
        return dyadic_profile(evolve_linear(phi_omega, time_grid.horizon)).norms
    depth = (order + 1) // 2
    tower = build_zeta_terms(free_trajectory(phi_omega, time_grid), depth, quadrature)
    last = tower.term(order).snapshot(time_grid.nodes - 1)
    return dyadic_profile(last).norms


def smoothing_fit(
    phi: SpectralField,
    window: WindowSpec,
    ensemble: EnsembleSpec,
    order: int,
    s: float,
    time_grid: TimeGrid,
    delta: float = 0.01,
    n_range: Optional[Tuple[float, float]] = None,
    tolerance: Optional[float] = None,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
    workers: int = 1,
) -> SmoothingResult:
    """
    Fit the ensemble-median dyadic profile of one expansion term at t = horizon

    Args:
        phi: Data with a prescribed dyadic profile (see power_profile_data)
        window: Wiener window family
        ensemble: Law, seed and member count
        order: Odd term order 2k - 1
        s: Data regularity
        time_grid: Grid on [0, t_eval]
        delta: Profile excess decay of phi
        n_range: Fit window in N; default [2, K/R] with K the dealiased radius
        tolerance: Slope tolerance (0.1 for order 1, 0.25 up to order 5, 0.3 beyond)

    Returns:
        SmoothingResult with the fit and the pass verdict

    Raises:
        FitError: with fewer than 3 dyadic blocks in range
    """
    if order < 1 or order % 2 == 0:
        raise ValueError(f"order must be odd and positive, got {order}")
    grid = phi.grid
    if n_range is None:
        n_range = (2.0, grid.retained_radius / grid.R)
    if tolerance is None:
        tolerance = 0.1 if order == 1 else (0.25 if order <= 5 else 0.3)

    profiles = ensemble_map(_member_profile, phi, window, ensemble, time_grid, order,
                            Quadrature(quadrature), workers=workers)
    scales = dyadic_profile(phi).scales
    q = quartiles(np.stack(profiles))

    in_range = (scales >= n_range[0]) & (scales <= n_range[1])
    fit = fit_loglog(scales[in_range], q[1][in_range], diagnostics={"n_range": list(n_range)})
    predicted = predicted_profile_slope(order, s, delta)
    if order == 1:
        passed = abs(fit.slope - predicted) <= tolerance
    else:
        passed = fit.slope <= predicted + tolerance
    logger.info(f"Order {order} dyadic slope {fit.slope:.3f} (predicted {predicted:.3f}, passed={passed})")
    return SmoothingResult(
        order=order, s=s, delta=delta, scales=scales, quartiles=q, fit=fit,
        predicted_slope=predicted, tolerance=tolerance, passed=passed, mean=pairwise_mean(profiles),
        settings={"members": ensemble.count, "t_eval": time_grid.horizon, "M_t": time_grid.nodes},
    )
