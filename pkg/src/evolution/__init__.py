"""Linear propagator, Duhamel operators and the split-step reference solver"""

from .duhamel import (
    Quadrature,
    duhamel_integral,
    duhamel_trilinear,
    phase_function,
    phase_function_factored,
)
from .propagator import PropagatorCache, evolve_linear, free_trajectory, phase_multipliers
from .split_step import split_step_reference

__all__ = [
    "Quadrature",
    "duhamel_integral",
    "duhamel_trilinear",
    "phase_function",
    "phase_function_factored",
    "PropagatorCache",
    "evolve_linear",
    "free_trajectory",
    "phase_multipliers",
    "split_step_reference",
]
