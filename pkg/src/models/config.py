"""Pydantic models for run configuration"""

import logging
import math
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..evolution.duhamel import Quadrature
from ..expansion.alpha import s_infinity, scaling_critical_regularity, step_count_for
from ..expansion.towers import ExpansionVariant
from ..randomization.laws import RandomLaw
from ..randomization.windows import WindowKind
from ..spectral.grid import GridSpec, TimeGrid

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    "randomize",
    "expand",
    "solve",
    "tail",
    "smooth-fit",
    "counterexample",
    "dispersive",
    "bilinear",
    "gain",
)

ExperimentName = Literal[
    "randomize", "expand", "solve", "tail", "smooth-fit", "counterexample", "dispersive", "bilinear", "gain"
]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridSection(_Section):
    M: int = Field(32, ge=8, description="Points per axis, a power of two")
    R: int = Field(1, ge=1, description="Box period is 2 pi R")
    dealias: float = Field(2.0 / 3.0, gt=0.0, le=1.0)

    @field_validator("M")
    def validate_power_of_two(cls, v):
        if v & (v - 1):
            raise ValueError(f"M must be a power of two, got {v}")
        return v

    def to_grid(self) -> GridSpec:
        return GridSpec(self.M, self.R, self.dealias)


class TimeSection(_Section):
    T: float = Field(0.1, gt=0.0)
    M_t: int = Field(17, ge=2)
    quadrature: Quadrature = Quadrature.TRAPEZOID

    def to_time_grid(self) -> TimeGrid:
        return TimeGrid(self.T, self.M_t)


class RandomizationSection(_Section):
    window: WindowKind = WindowKind.SHARP_CUBE
    width: float = Field(0.25, gt=0.0, le=0.5)
    law: RandomLaw = RandomLaw.COMPLEX_GAUSSIAN
    seed: int = Field(0, ge=0)
    members: int = Field(1, ge=1)


class RegularitySection(_Section):
    s: float = Field(0.3, ge=0.0, le=1.0)
    sigma: float = Field(0.5, ge=0.0, le=1.0)
    k: Union[int, Literal["auto"]] = "auto"
    delta: float = Field(0.01, ge=0.0)

    @field_validator("k")
    def validate_k(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError(f"k must be >= 1 or 'auto', got {v}")
        return v


class DataSection(_Section):
    """Deterministic data before randomization"""
    kind: Literal["power", "bump", "ball"] = "power"
    amplitude: Optional[float] = Field(None, gt=0.0)
    width: float = Field(0.5, gt=0.0)
    radius: float = Field(2.0, gt=0.0)


class ExperimentSection(_Section):
    """Experiment selector and the parameters its operation takes"""
    name: ExperimentName
    order: int = Field(3, ge=1)
    variant: ExpansionVariant = ExpansionVariant.UNBALANCED_ZETA
    q: float = Field(10.0 / 3.0, ge=2.0)
    r: float = Field(10.0 / 3.0, ge=2.0)
    thresholds: Optional[List[float]] = None
    kind: Literal["z3", "trilinear", "convolution"] = "z3"
    frequencies: Optional[List[float]] = None
    box_scale: float = Field(1.0, gt=0.0)
    offset: float = Field(2.0, gt=1.0)
    box_fraction: float = Field(1.0, gt=0.0, le=1.0)
    times: Optional[List[float]] = None
    n1: int = Field(1, ge=1)
    n2: List[int] = Field(default_factory=lambda: [2, 4, 8])
    pairing: Literal["blocks", "tube"] = "blocks"
    horizons: Optional[List[float]] = None
    scales: Optional[List[int]] = None
    tolerance: Optional[float] = Field(None, gt=0.0)
    max_iterations: int = Field(50, ge=1)
    solver_tolerance: float = Field(1e-10, gt=0.0)

    @field_validator("q", "r", mode="before")
    def coerce_infinity(cls, v):
        if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
            return math.inf
        return v

    @field_validator("order")
    def validate_order(cls, v):
        if v % 2 == 0:
            raise ValueError(f"order must be odd, got {v}")
        return v


class OutputSection(_Section):
    dir: Optional[str] = None
    snapshots: bool = True


class RunConfig(_Section):
    """Validated run configuration"""
    grid: GridSection = Field(default_factory=GridSection)
    time: TimeSection = Field(default_factory=TimeSection)
    randomization: RandomizationSection = Field(default_factory=RandomizationSection)
    regularity: RegularitySection = Field(default_factory=RegularitySection)
    data: DataSection = Field(default_factory=DataSection)
    experiment: ExperimentSection
    output: OutputSection = Field(default_factory=OutputSection)
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def validate_regularity(self):
        name = self.experiment.name
        s = self.regularity.s
        if name == "solve" or (name == "expand" and self.regularity.k == "auto"):
            if not float(s_infinity()) < s < float(scaling_critical_regularity()):
                raise ValueError(
                    f"experiment '{name}' needs 1/6 < s < 1/2, got s={s} (below s_infinity = 1/6 there is no finite expansion)"
                )
        if name == "solve" and not 0.5 <= self.regularity.sigma <= 1.0:
            raise ValueError(f"solve needs sigma in [1/2, 1], got {self.regularity.sigma}")
        if isinstance(self.regularity.k, int) and float(s_infinity()) < s < 0.5:
            expected = step_count_for(s)
            if self.regularity.k != expected:
                logger.warning(f"k={self.regularity.k} outside the bracket for s={s}; expected k={expected}")
        return self

    @property
    def depth(self) -> int:
        """Expansion depth k with 'auto' resolved"""
        if self.regularity.k == "auto":
            return step_count_for(self.regularity.s)
        return int(self.regularity.k)
