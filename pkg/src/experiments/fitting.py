"""Log-log slope fits and empirical tail curves"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..utils.errors import FitError

MIN_FIT_POINTS = 3


@dataclass
class FitResult:
    """
    Straight-line fit y = slope * x + intercept, usually in log-log coordinates.

    residual_std_error is in the units of the fitted ordinate (log_base units
    for log-log fits); x_range is the abscissa span in original units.
    """
    slope: float
    intercept: float
    residual_std_error: float
    count: int
    x_range: Tuple[float, float]
    slope_std_error: float = math.nan
    r_squared: float = math.nan
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.count < MIN_FIT_POINTS:
            raise FitError(f"a fit needs at least {MIN_FIT_POINTS} points, got {self.count}")
        if not math.isfinite(self.slope):
            raise FitError("fitted slope is not finite")

    def is_reliable(self, min_points: int = 4, max_rse: float = 0.1) -> bool:
        """Acceptance gate: enough points and a small residual error"""
        return self.count >= min_points and self.residual_std_error <= max_rse

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["x_range"] = list(self.x_range)
        return out


def fit_linear(x: Sequence[float], y: Sequence[float], diagnostics: Optional[Dict[str, Any]] = None) -> FitResult:
    """Ordinary least squares through finite (x, y) pairs"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    if x.size < MIN_FIT_POINTS:
        raise FitError(f"only {x.size} usable points, need {MIN_FIT_POINTS}")
    if np.ptp(x) == 0:
        raise FitError("abscissae are all equal")

    result = stats.linregress(x, y)
    residuals = y - (result.slope * x + result.intercept)
    rse = math.sqrt(float(np.sum(residuals ** 2)) / (x.size - 2)) if x.size > 2 else 0.0
    return FitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        residual_std_error=rse,
        count=int(x.size),
        x_range=(float(x.min()), float(x.max())),
        slope_std_error=float(result.stderr),
        r_squared=float(result.rvalue ** 2),
        diagnostics=dict(diagnostics or {}),
    )


def fit_loglog(
    x: Sequence[float],
    y: Sequence[float],
    base: float = 2.0,
    diagnostics: Optional[Dict[str, Any]] = None,
) -> FitResult:
    """
    Fit log_base(y) against log_base(x), dropping non-positive or non-finite pairs

    Raises:
        FitError: with fewer than 3 usable points
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if keep.sum() < MIN_FIT_POINTS:
        raise FitError(f"only {int(keep.sum())} positive points, need {MIN_FIT_POINTS}")
    scale = math.log(base)
    fit = fit_linear(np.log(x[keep]) / scale, np.log(y[keep]) / scale, diagnostics)
    fit.x_range = (float(x[keep].min()), float(x[keep].max()))
    fit.diagnostics.setdefault("log_base", base)
    return fit


@dataclass
class TailCurve:
    """Empirical exceedance probabilities P(X > lambda) over a threshold grid"""
    thresholds: np.ndarray
    probabilities: np.ndarray
    ensemble_size: int

    def __post_init__(self):
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        if self.thresholds.shape != self.probabilities.shape:
            raise ValueError("thresholds and probabilities differ in length")
        if np.any(np.diff(self.thresholds) < 0):
            raise ValueError("thresholds must be sorted")
        if np.any((self.probabilities < 0) | (self.probabilities > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.any(np.diff(self.probabilities) > 0):
            raise ValueError("exceedance probabilities must be nonincreasing")

    def rows(self):
        return [(float(t), float(p)) for t, p in zip(self.thresholds, self.probabilities)]


def tail_curve(values: Sequence[float], thresholds: Sequence[float]) -> TailCurve:
    """Fraction of values strictly above each sorted threshold"""
    values = np.sort(np.asarray(values, dtype=float))
    thresholds = np.sort(np.asarray(thresholds, dtype=float))
    above = values.size - np.searchsorted(values, thresholds, side="right")
    return TailCurve(thresholds, above / values.size, int(values.size))


def default_thresholds(values: Sequence[float], count: int = 24) -> np.ndarray:
    """Grid from 0 through the sample maximum, denser above the median"""
    values = np.asarray(values, dtype=float)
    median, top = float(np.median(values)), float(values.max())
    if top <= median:
        return np.linspace(0.0, max(top, 1e-300) * 1.5, count)
    return np.concatenate([[0.0], np.linspace(median, top, count - 1)])


def fit_tail(curve: TailCurve, min_size: int = 50) -> FitResult:
    """
    Fit log P against lambda^2 over thresholds with 0 < P < 1

    Raises:
        FitError: for ensembles smaller than min_size or too few usable thresholds
    """
    if curve.ensemble_size < min_size:
        raise FitError(f"tail fits need at least {min_size} members, got {curve.ensemble_size}")
    keep = (curve.probabilities > 0) & (curve.probabilities < 1)
    lam = curve.thresholds[keep]
    return fit_linear(lam ** 2, np.log(curve.probabilities[keep]), {"abscissa": "lambda^2"})
