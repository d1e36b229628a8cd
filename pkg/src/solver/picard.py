"""Picard iteration for the residual of a truncated expansion"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .residual import discretization_floor, nls_residual
from ..evolution.duhamel import Quadrature, duhamel_integral
from ..evolution.propagator import free_trajectory
from ..expansion.towers import ExpansionSet, forcing_sum
from ..spectral.grid import FieldTrajectory, SpectralField, TimeGrid
from ..spectral.norms import energy
from ..spectral.products import trajectory_cubic
from ..utils.errors import GridMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls for picard_solve"""
    depth: Optional[int] = None
    tolerance: float = 1e-10
    max_iterations: int = 50
    sigma: float = 0.5
    v0: Optional[SpectralField] = None
    quadrature: Quadrature = Quadrature.TRAPEZOID
    divergence_window: int = 3
    compute_residual: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.depth is not None and self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "quadrature", Quadrature(self.quadrature))


@dataclass
class SolveReport:
    """Diagnostics of one Picard solve"""
    iterations: int = 0
    increments: List[float] = field(default_factory=list)
    residual: float = math.nan
    discretization_floor: float = math.nan
    contraction_ratio: float = math.nan
    converged: bool = False
    diverged: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def sup_sobolev(traj: FieldTrajectory, sigma: float) -> float:
    """max over nodes of the H^sigma norm"""
    weight = traj.grid.japanese_bracket ** (2.0 * sigma)
    sums = np.sum(weight * np.abs(traj.data) ** 2, axis=(-3, -2, -1)) * traj.grid.cell_volume
    return float(np.sqrt(sums.max()))


def contraction_ratio(increments: Sequence[float], floor: float = 1e-14) -> float:
    """Median ratio of consecutive increments above the round-off floor"""
    ratios = [b / a for a, b in zip(increments, increments[1:]) if a > floor]
    return float(np.median(ratios)) if ratios else math.nan


def _growing(increments: Sequence[float], window: int) -> bool:
    if len(increments) <= window:
        return False
    tail = increments[-(window + 1):]
    return all(b > a for a, b in zip(tail, tail[1:]))


@dataclass(frozen=True, eq=False)
class ResidualProblem:
    """Fixed data of the residual equation: expansion sum, forcing and free part"""
    expansion_sum: FieldTrajectory
    forcing: FieldTrajectory
    free_part: FieldTrajectory
    quadrature: Quadrature

    @classmethod
    def from_expansion(cls, expansion: ExpansionSet, cfg: SolverConfig) -> "ResidualProblem":
        depth = cfg.depth or expansion.depth
        truncated = expansion.truncated(depth)
        if cfg.v0 is None:
            free_part = FieldTrajectory.zeros(expansion.grid, expansion.time_grid)
        else:
            if cfg.v0.grid != expansion.grid:
                raise GridMismatchError("v0 lives on a different grid than the expansion")
            free_part = free_trajectory(cfg.v0, expansion.time_grid)
        return cls(truncated.total(), forcing_sum(truncated), free_part, cfg.quadrature)

    def apply(self, v: FieldTrajectory) -> FieldTrajectory:
        """S(t)v0 - i int S(t - t') {N(v + sum) - forcing}(t') dt'"""
        source = trajectory_cubic(v + self.expansion_sum) - self.forcing
        return self.free_part + duhamel_integral(source, self.quadrature)


def picard_solve(
    expansion: ExpansionSet,
    cfg: SolverConfig,
    time_grid: Optional[TimeGrid] = None,
    initial: Optional[FieldTrajectory] = None,
) -> Tuple[FieldTrajectory, SolveReport]:
    """
    Iterate the residual map until the sup-in-time H^sigma increment is below tolerance

    Args:
        expansion: Unbalanced set, or full-z set of depth <= 2
        cfg: Solver configuration
        time_grid: Must match the expansion's time grid when given
        initial: First iterate (default S(t)v0)

    Returns:
        (v, report); divergence is reported, never raised
    """
    if time_grid is not None and time_grid != expansion.time_grid:
        raise GridMismatchError(f"time grid {time_grid} differs from the expansion's")
    problem = ResidualProblem.from_expansion(expansion, cfg)
    v = problem.free_part if initial is None else initial
    v.check_compatible(problem.free_part)

    report = SolveReport()
    for iteration in range(1, cfg.max_iterations + 1):
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                v_next = problem.apply(v)
        except ValueError as e:
            # non-finite iterate
            logger.warning(f"Picard iterate {iteration} is not finite: {e}")
            report.diverged = True
            break
        increment = sup_sobolev(v_next - v, cfg.sigma)
        v = v_next
        report.iterations = iteration
        report.increments.append(increment)
        logger.debug(f"Picard iteration {iteration}: increment {increment:.3e}")

        if increment <= cfg.tolerance:
            report.converged = True
            break
        if _growing(report.increments, cfg.divergence_window):
            report.diverged = True
            break

    report.contraction_ratio = contraction_ratio(report.increments)
    if cfg.compute_residual and expansion.time_grid.nodes >= 3 and not report.diverged:
        u = reconstruct_u(expansion, v, cfg.depth)
        report.residual = nls_residual(u)
        report.discretization_floor = discretization_floor(u)

    if report.converged:
        logger.info(f"Picard solve converged in {report.iterations} iterations")
    else:
        logger.warning(
            f"Picard solve stopped after {report.iterations} iterations without converging "
            f"(diverged={report.diverged})"
        )
    return v, report


def reconstruct_u(expansion: ExpansionSet, v: FieldTrajectory, depth: Optional[int] = None) -> FieldTrajectory:
    """u = sum of the first ``depth`` expansion terms + v"""
    truncated = expansion.truncated(depth or expansion.depth)
    v.check_compatible(truncated.linear_solution)
    return truncated.total() + v


@dataclass
class UniquenessReport:
    """Agreement of Picard solves started from different iterates"""
    spread: float
    converged: List[bool]
    iterations: List[int]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def uniqueness_witness(
    expansion: ExpansionSet,
    cfg: SolverConfig,
    starts: Optional[Sequence[FieldTrajectory]] = None,
) -> UniquenessReport:
    """
    Solve from several initial iterates and report the largest sup-H^sigma
    distance between the converged solutions
    """
    if starts is None:
        base = expansion.truncated(cfg.depth or expansion.depth).total()
        zero = FieldTrajectory.zeros(expansion.grid, expansion.time_grid)
        starts = [zero, 0.5 * base, -0.5 * base]

    solutions, converged, iterations = [], [], []
    for start in starts:
        v, report = picard_solve(expansion, cfg, initial=start)
        converged.append(report.converged)
        iterations.append(report.iterations)
        if report.converged:
            solutions.append(v)

    spread = 0.0
    for a, b in itertools.combinations(solutions, 2):
        spread = max(spread, sup_sobolev(a - b, cfg.sigma))
    if len(solutions) < 2:
        spread = math.nan
    return UniquenessReport(spread, converged, iterations)


@dataclass
class HorizonOutcome:
    horizon: float
    converged: bool
    iterations: int
    contraction_ratio: float


def sweep_horizons(
    expansion: ExpansionSet,
    cfg: SolverConfig,
    horizons: Sequence[float],
) -> List[HorizonOutcome]:
    """Converged/diverged verdict of the residual solve on each [0, T]"""
    outcomes = []
    for T in sorted(horizons):
        restricted = expansion.restricted(T)
        _, report = picard_solve(restricted, cfg)
        outcomes.append(HorizonOutcome(restricted.time_grid.horizon, report.converged,
                                       report.iterations, report.contraction_ratio))
    return outcomes


def energy_trajectory(v: FieldTrajectory) -> np.ndarray:
    """E(v(t)) at every node; not conserved for the residual"""
    return np.array([energy(snap) for snap in v.snapshots])
