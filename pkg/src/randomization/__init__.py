"""Wiener randomization of initial data"""

from .laws import (
    RandomLaw,
    exact_exponential_moment,
    exponential_moment_constant,
    sample_unit,
    sample_units,
)
from .windows import WindowKind, WindowSpec, partition_error, window_weight
from .wiener import (
    EnsembleSpec,
    cube_coefficient,
    member_key,
    occupied_cubes,
    randomize_ensemble,
    randomized_data,
    wiener_randomize,
)

__all__ = [
    "RandomLaw",
    "exact_exponential_moment",
    "exponential_moment_constant",
    "sample_unit",
    "sample_units",
    "WindowKind",
    "WindowSpec",
    "partition_error",
    "window_weight",
    "EnsembleSpec",
    "cube_coefficient",
    "member_key",
    "occupied_cubes",
    "randomize_ensemble",
    "randomized_data",
    "wiener_randomize",
]
