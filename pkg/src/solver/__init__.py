"""Residual Picard solver and plug-back verification"""

from .picard import (
    HorizonOutcome,
    ResidualProblem,
    SolveReport,
    SolverConfig,
    UniquenessReport,
    contraction_ratio,
    energy_trajectory,
    picard_solve,
    reconstruct_u,
    sup_sobolev,
    sweep_horizons,
    uniqueness_witness,
)
from .residual import discretization_floor, nls_residual, residual_profile

__all__ = [
    "HorizonOutcome",
    "ResidualProblem",
    "SolveReport",
    "SolverConfig",
    "UniquenessReport",
    "contraction_ratio",
    "energy_trajectory",
    "picard_solve",
    "reconstruct_u",
    "sup_sobolev",
    "sweep_horizons",
    "uniqueness_witness",
    "discretization_floor",
    "nls_residual",
    "residual_profile",
]
