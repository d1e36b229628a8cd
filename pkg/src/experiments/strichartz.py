"""Probabilistic Strichartz tails and deterministic space-time estimates"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sfft
from scipy.integrate import trapezoid

from .data import ball_data, tube_data
from .ensemble import ensemble_map, quartiles
from .fitting import FitResult, TailCurve, default_thresholds, fit_loglog, fit_tail, tail_curve
from ..evolution.duhamel import Quadrature
from ..evolution.propagator import evolve_linear, free_trajectory
from ..expansion.towers import build_zeta_terms
from ..randomization.windows import WindowSpec
from ..randomization.wiener import EnsembleSpec
from ..spectral.grid import FieldTrajectory, GridSpec, SpectralField, TimeGrid, inverse_transform
from ..spectral.norms import (
    l2_norm,
    lebesgue_norm,
    littlewood_paley,
    lp_symbol,
    sobolev_norm,
    spacetime_norm,
)
from ..utils.errors import FitError, HorizonError
from ..utils.parallel import pairwise_mean

logger = logging.getLogger(__name__)

ADMISSIBLE_ATOL = 1e-12


def admissible_check(q: float, r: float) -> bool:
    """2/q + 3/r = 3/2 with 2 <= q, r <= inf"""
    if not (2.0 <= q <= math.inf and 2.0 <= r <= math.inf):
        return False
    lhs = (0.0 if math.isinf(q) else 2.0 / q) + (0.0 if math.isinf(r) else 3.0 / r)
    return abs(lhs - 1.5) <= ADMISSIBLE_ATOL


@dataclass
class TailResult:
    curve: TailCurve
    fit: Optional[FitResult]
    samples: np.ndarray
    settings: Dict[str, Any] = field(default_factory=dict)

    columns = ("lambda", "probability")

    def rows(self) -> List[Tuple[float, float]]:
        return self.curve.rows()

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": "tail",
            "ensemble_size": self.curve.ensemble_size,
            "median": float(np.median(self.samples)),
            "mean": float(pairwise_mean(list(self.samples))),
            "fit": self.fit.to_dict() if self.fit is not None else None,
            "negative_slope": bool(self.fit is not None and self.fit.slope < 0),
            **self.settings,
        }


def _member_spacetime_norm(phi_omega: SpectralField, time_grid: TimeGrid, q: float, r: float) -> float:
    return spacetime_norm(free_trajectory(phi_omega, time_grid), q, r, time_grid.horizon)


def _member_sobolev_norm(phi_omega: SpectralField, s: float) -> float:
    return sobolev_norm(phi_omega, s)


def strichartz_samples(
    phi: SpectralField,
    window: WindowSpec,
    ensemble: EnsembleSpec,
    q: float,
    r: float,
    time_grid: TimeGrid,
    workers: int = 1,
) -> np.ndarray:
    """||S(t) phi^omega||_{L^q_T L^r_x} for every member, T = time_grid.horizon"""
    if not (2.0 <= q < math.inf):
        raise ValueError(f"tail statistics need a finite q >= 2, got {q}")
    if not (2.0 <= r < math.inf):
        raise ValueError(f"tail statistics need 2 <= r < inf, got {r}")
    return np.array(ensemble_map(_member_spacetime_norm, phi, window, ensemble, time_grid, q, r, workers=workers))


def _tail(samples: np.ndarray, thresholds: Optional[Sequence[float]], fit: bool, min_size: int) -> Tuple[TailCurve, Optional[FitResult]]:
    if thresholds is None:
        thresholds = default_thresholds(samples)
    curve = tail_curve(samples, thresholds)
    return curve, (fit_tail(curve, min_size) if fit else None)


def strichartz_tail(
    phi: SpectralField,
    window: WindowSpec,
    ensemble: EnsembleSpec,
    q: float,
    r: float,
    time_grid: TimeGrid,
    thresholds: Optional[Sequence[float]] = None,
    fit: bool = True,
    min_size: int = 50,
    workers: int = 1,
) -> TailResult:
    """
    Empirical P(||S(t) phi^omega||_{L^q_T L^r_x} > lambda) and its log-P vs lambda^2 fit

    Raises:
        FitError: when fitting an ensemble smaller than min_size
    """
    samples = strichartz_samples(phi, window, ensemble, q, r, time_grid, workers)
    curve, result = _tail(samples, thresholds, fit, min_size)
    logger.info(f"Strichartz tail over {samples.size} members: median norm {np.median(samples):.4g}")
    return TailResult(curve, result, samples, {"norm": "strichartz", "q": q, "r": r, "T": time_grid.horizon})


def hs_tail(
    phi: SpectralField,
    window: WindowSpec,
    ensemble: EnsembleSpec,
    s: float,
    thresholds: Optional[Sequence[float]] = None,
    fit: bool = False,
    min_size: int = 50,
    workers: int = 1,
) -> TailResult:
    """Empirical P(||phi^omega||_{H^s} > lambda)"""
    samples = np.array(ensemble_map(_member_sobolev_norm, phi, window, ensemble, s, workers=workers))
    curve, result = _tail(samples, thresholds, fit, min_size)
    return TailResult(curve, result, samples, {"norm": "sobolev", "s": s})


@dataclass
class DispersiveResult:
    times: np.ndarray
    norms: np.ndarray
    window: Tuple[float, float]
    r: float
    fit: FitResult
    predicted_slope: float
    tolerance: float
    passed: bool

    columns = ("t", "norm")

    def rows(self) -> List[Tuple[float, float]]:
        return [(float(t), float(n)) for t, n in zip(self.times, self.norms)]

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": "dispersive",
            "r": "inf" if math.isinf(self.r) else self.r,
            "window": list(self.window),
            "fit": self.fit.to_dict(),
            "predicted_slope": self.predicted_slope,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def rms_widths(f: SpectralField) -> Tuple[float, float]:
    """Per-axis RMS widths of |f|^2 in space and of |f_hat|^2 in frequency"""
    grid = f.grid
    x, y, z = grid.centered_coordinates()
    density = np.abs(inverse_transform(f)) ** 2
    total = float(density.sum())
    if total == 0:
        raise ValueError("RMS widths of the zero field are undefined")
    sigma_x = math.sqrt(float(np.sum(density * (x ** 2 + y ** 2 + z ** 2))) / total / 3.0)
    spectrum = np.abs(f.coefficients) ** 2
    sigma_k = math.sqrt(float(np.sum(spectrum * grid.frequency_squared)) / float(spectrum.sum()) / 3.0)
    return sigma_x, sigma_k


def dispersive_window(f: SpectralField) -> Tuple[float, float]:
    """[4 sigma_x^2, period / (12 sigma_k)]: past the initial spreading, before periodic images return"""
    sigma_x, sigma_k = rms_widths(f)
    upper = f.grid.period / (12.0 * sigma_k) if sigma_k > 0 else math.inf
    return 4.0 * sigma_x ** 2, upper


def predicted_decay(r: float) -> float:
    """-(3/2)(1 - 2/r)"""
    return -1.5 if math.isinf(r) else -1.5 * (1.0 - 2.0 / r)


def dispersive_decay(
    f: SpectralField,
    r: float,
    times: Optional[Sequence[float]] = None,
    count: int = 12,
    tolerance: Optional[float] = None,
) -> DispersiveResult:
    """
    Fitted decay exponent of ||S(t) f||_{L^r} over the valid window

    Args:
        f: Spatially localized data
        r: Lebesgue exponent >= 2 (inf is the grid maximum)
        times: Candidate times; only those inside the window are used.
            Default: ``count`` geometrically spaced times spanning the window
        tolerance: 0.15, or 0.2 for r = inf

    Raises:
        FitError: if fewer than 3 times fall in the window
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    lo, hi = dispersive_window(f)
    if times is None:
        if not hi > lo:
            raise FitError(f"dispersive window [{lo:.4g}, {hi:.4g}] is empty")
        t = np.geomspace(lo, hi, count)
    else:
        t = np.asarray([x for x in times if lo <= x <= hi], dtype=float)
    if t.size < 3:
        raise FitError(f"only {t.size} times inside the window [{lo:.4g}, {hi:.4g}]")

    norms = np.array([lebesgue_norm(inverse_transform(evolve_linear(f, float(x))), f.grid, r) for x in t])
    fit = fit_loglog(t, norms, diagnostics={"window": [lo, hi]})
    predicted = predicted_decay(r)
    if tolerance is None:
        tolerance = 0.2 if math.isinf(r) else 0.15
    passed = abs(fit.slope - predicted) <= tolerance
    logger.info(f"Dispersive decay r={r}: slope {fit.slope:.3f} (predicted {predicted:.3f})")
    return DispersiveResult(t, norms, (lo, hi), r, fit, predicted, tolerance, passed)


def _padded_physical(data: np.ndarray, grid: GridSpec, size: int) -> np.ndarray:
    """Physical samples of spectral arrays (..., M, M, M) on a size^3 grid"""
    M = grid.M
    idx = grid.mode_indices
    sel_m = np.ix_(idx % M, idx % M, idx % M)
    sel_p = np.ix_(idx % size, idx % size, idx % size)
    padded = np.zeros(data.shape[:-3] + (size, size, size), dtype=np.complex128)
    padded[(Ellipsis,) + sel_p] = data[(Ellipsis,) + sel_m] * (size / M) ** 1.5
    return sfft.ifftn(padded, axes=(-3, -2, -1), norm="ortho")


def bilinear_norm(u1: FieldTrajectory, u2: FieldTrajectory) -> float:
    """
    ||u1 u2||_{L^2_{T,x}}, exact in space

    The product is evaluated on a grid of 2M points per axis, where it is
    represented without aliasing, so the spatial sum equals the integral.
    """
    u1.check_compatible(u2)
    grid = u1.grid
    size = sfft.next_fast_len(2 * grid.M)
    cell = (grid.period / size) ** 3
    per_time = np.array([
        float(np.sum(np.abs(_padded_physical(a, grid, size) * _padded_physical(b, grid, size)) ** 2) * cell)
        for a, b in zip(u1.data, u2.data)
    ])
    return math.sqrt(float(trapezoid(per_time, u1.time_grid.times)))


@dataclass
class BilinearResult:
    n1: int
    n2: np.ndarray
    norms: np.ndarray
    ratios: np.ndarray
    fit: Optional[FitResult]
    predicted_slope: float = -0.5
    tolerance: float = 0.15
    pairing: str = "blocks"

    columns = ("N2", "norm", "ratio")

    @property
    def passed(self) -> Optional[bool]:
        """Generic blocks decay at least like N2^(-1/2); the tube pairing decays no faster"""
        if self.fit is None:
            return None
        if self.pairing == "tube":
            return self.fit.slope >= self.predicted_slope - self.tolerance
        return self.fit.slope <= self.predicted_slope + self.tolerance

    def rows(self) -> List[Tuple[float, float, float]]:
        return [(float(n), float(v), float(q)) for n, v, q in zip(self.n2, self.norms, self.ratios)]

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": "bilinear",
            "pairing": self.pairing,
            "N1": self.n1,
            "fit": self.fit.to_dict() if self.fit is not None else None,
            "predicted_slope": self.predicted_slope,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _normalized(f: SpectralField) -> SpectralField:
    norm = l2_norm(f)
    return f * (1.0 / norm) if norm > 0 else f


def _bilinear_sweep(
    u1: FieldTrajectory,
    seconds: Sequence[SpectralField],
    n1: int,
    n2_values: Sequence[int],
    time_grid: TimeGrid,
    pairing: str,
) -> BilinearResult:
    norms = np.array([bilinear_norm(u1, free_trajectory(f, time_grid)) for f in seconds])
    n2 = np.asarray(n2_values, dtype=float)
    ratios = norms / (n1 * n2 ** -0.5)
    fit = None
    if np.count_nonzero(norms > 0) >= 3:
        fit = fit_loglog(n2, norms, diagnostics={"N1": n1, "pairing": pairing})
    return BilinearResult(n1=n1, n2=n2, norms=norms, ratios=ratios, fit=fit, pairing=pairing)


def bilinear_strichartz(
    phi1: SpectralField,
    phi2: SpectralField,
    n1: int,
    n2_values: Sequence[int],
    time_grid: TimeGrid,
) -> BilinearResult:
    """
    ||P_N1 S(t) phi1 * P_N2 S(t) phi2||_{L^2_{T,x}} across an N2 sweep

    Both blocks are L^2-normalized; the ratio divides by N1 * N2^(-1/2).
    With at least 3 nonzero values the N2 exponent is fitted.

    Raises:
        ValueError: for N2 < N1 or N2 above Nyquist / 2
    """
    grid = phi1.grid
    for n2 in n2_values:
        if n2 < n1:
            raise ValueError(f"N2={n2} below N1={n1}")
        if n2 > grid.nyquist / 2.0:
            raise ValueError(f"N2={n2} above Nyquist/2 = {grid.nyquist / 2.0}")
    u1 = free_trajectory(_normalized(littlewood_paley(phi1, n1)), time_grid)
    seconds = [_normalized(littlewood_paley(phi2, n2)) for n2 in n2_values]
    return _bilinear_sweep(u1, seconds, n1, n2_values, time_grid, "blocks")


def tube_bilinear(grid: GridSpec, n1: int, n2_values: Sequence[int], time_grid: TimeGrid) -> BilinearResult:
    """
    Concentrated pairing: the ball |xi| <= N1 against a tube of cross-section N1 at height N2

    Both inputs are L^2-normalized. The product stays coherent along the tube,
    so the N2 exponent should not fall below -1/2.

    Raises:
        ValueError: for N2 < N1 or a tube reaching past the retained cube
    """
    edge = grid.retained_radius / grid.R
    for n2 in n2_values:
        if n2 < n1:
            raise ValueError(f"N2={n2} below N1={n1}")
        if 1.25 * n2 > edge:
            raise ValueError(f"tube at N2={n2} reaches past the retained radius {edge}")
    u1 = free_trajectory(_normalized(ball_data(grid, n1)), time_grid)
    seconds = [_normalized(tube_data(grid, n1, n2)) for n2 in n2_values]
    return _bilinear_sweep(u1, seconds, n1, n2_values, time_grid, "tube")


@dataclass
