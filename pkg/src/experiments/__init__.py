"""Rate fits, counterexamples and space-time statistics"""

from .counterexamples import (
    BoxConvolution,
    CounterexampleResult,
    CounterexampleSpec,
    box_convolution_bound,
    check_box_geometry,
    phase_bound,
    quintilinear_iterate,
    trilinear_nonsmoothing,
    z3_nonsmoothing_counterexample,
)
from .data import ball_data, box_indicator, box_mask, gaussian_bump, power_profile_data, tube_data
from .ensemble import ensemble_map, quartiles
from .fitting import FitResult, TailCurve, default_thresholds, fit_linear, fit_loglog, fit_tail, tail_curve
from .smoothing import SmoothingResult, predicted_profile_slope, smoothing_fit
from .strichartz import (
    BilinearResult,
    DispersiveResult,
    GainResult,
    TailResult,
    admissible_check,
    bilinear_norm,
    bilinear_strichartz,
    dispersive_decay,
    dispersive_window,
    hs_tail,
    integrability_gain,
    predicted_decay,
    strichartz_samples,
    strichartz_tail,
    tube_bilinear,
)
from .variation import discrete_variation_norm, xnorm_proxy, xnorm_upper_surrogate

__all__ = [
    "BoxConvolution",
    "CounterexampleResult",
    "CounterexampleSpec",
    "box_convolution_bound",
    "check_box_geometry",
    "phase_bound",
    "quintilinear_iterate",
    "trilinear_nonsmoothing",
    "z3_nonsmoothing_counterexample",
    "ball_data",
    "box_indicator",
    "box_mask",
    "gaussian_bump",
    "power_profile_data",
    "tube_data",
    "ensemble_map",
    "quartiles",
    "FitResult",
    "TailCurve",
    "default_thresholds",
    "fit_linear",
    "fit_loglog",
    "fit_tail",
    "tail_curve",
    "SmoothingResult",
    "predicted_profile_slope",
    "smoothing_fit",
    "BilinearResult",
    "DispersiveResult",
    "GainResult",
    "TailResult",
    "admissible_check",
    "bilinear_norm",
    "bilinear_strichartz",
    "dispersive_decay",
    "dispersive_window",
    "hs_tail",
    "integrability_gain",
    "predicted_decay",
    "strichartz_samples",
    "strichartz_tail",
    "tube_bilinear",
    "discrete_variation_norm",
    "xnorm_proxy",
    "xnorm_upper_surrogate",
]
