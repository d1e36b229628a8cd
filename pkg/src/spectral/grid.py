"""Periodic grid, spectral fields and trajectories"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Tuple

import numpy as np
from scipy import fft as sfft

from ..utils.errors import GridError, GridMismatchError, HorizonError


@dataclass(frozen=True)
class GridSpec:
    """
    Cubic periodic box of period 2*pi*R sampled with M points per axis.

    The frequency lattice is {m/R : -M/2 <= m < M/2}^3 in DFT-standard order,
    so every unit Wiener cube holds R^3 lattice points.
    """
    points_per_axis: int
    oversampling: int = 1
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        M = self.points_per_axis
        if not isinstance(M, (int, np.integer)) or M < 8 or (M & (M - 1)) != 0:
            raise GridError(f"points_per_axis must be a power of two >= 8, got {M}")
        if not isinstance(self.oversampling, (int, np.integer)) or self.oversampling < 1:
            raise GridError(f"oversampling must be an integer >= 1, got {self.oversampling}")
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise GridError(f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}")

    @property
    def M(self) -> int:
        return int(self.points_per_axis)

    @property
    def R(self) -> int:
        return int(self.oversampling)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.M, self.M, self.M)

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.R

    @property
    def dx(self) -> float:
        return self.period / self.M

    @property
    def cell_volume(self) -> float:
        return self.dx ** 3

    @property
    def box_volume(self) -> float:
        return self.period ** 3

    @cached_property
    def mode_indices(self) -> np.ndarray:
        """Signed integer mode numbers m along one axis, DFT order"""
        return np.rint(sfft.fftfreq(self.M, d=1.0 / self.M)).astype(np.int64)

    @cached_property
    def axis_frequencies(self) -> np.ndarray:
        """Frequencies m/R along one axis, DFT order"""
        return self.mode_indices / self.R

    @cached_property
    def frequencies(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable (M,1,1), (1,M,1), (1,1,M) frequency components"""
        k = self.axis_frequencies
        return k[:, None, None], k[None, :, None], k[None, None, :]

    @cached_property
    def frequency_squared(self) -> np.ndarray:
        kx, ky, kz = self.frequencies
        return kx ** 2 + ky ** 2 + kz ** 2

    @cached_property
    def frequency_modulus(self) -> np.ndarray:
        return np.sqrt(self.frequency_squared)

    @cached_property
    def japanese_bracket(self) -> np.ndarray:
        """<xi> = (1 + |xi|^2)^(1/2)"""
        return np.sqrt(1.0 + self.frequency_squared)

    @property
    def nyquist(self) -> float:
        """Largest representable per-axis frequency"""
        return self.M / (2.0 * self.R)

    @property
    def max_frequency(self) -> float:
        """Largest |xi| on the lattice (cube corner)"""
        return math.sqrt(3.0) * self.nyquist

    @property
    def retained_radius(self) -> int:
        """Per-axis mode bound K of the dealiased region |m| <= K"""
        return min(int(math.floor(self.dealias_fraction * self.M / 2.0)), self.M // 2 - 1)

    @cached_property
    def retained_mask(self) -> np.ndarray:
        keep = np.abs(self.mode_indices) <= self.retained_radius
        return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]

    @property
    def padded_points(self) -> int:
        """Padded grid size on which cubic products alias only outside the retained cube"""
        return max(self.M, sfft.next_fast_len(4 * self.retained_radius + 1))

    def physical_coordinates(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable grid coordinates x_j = j*dx"""
        x = np.arange(self.M) * self.dx
        return x[:, None, None], x[None, :, None], x[None, None, :]

    def centered_coordinates(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coordinates wrapped to [-period/2, period/2)"""
        x = np.arange(self.M) * self.dx
        x = np.where(x >= self.period / 2.0, x - self.period, x)
        return x[:, None, None], x[None, :, None], x[None, None, :]

    def index_of(self, m: Tuple[int, int, int]) -> Tuple[int, int, int]:
        """Array index of the signed mode triple m"""
        half = self.M // 2
        for mi in m:
            if not -half <= mi < half:
                raise GridError(f"mode {m} is not representable on an M={self.M} grid")
        return tuple(int(mi) % self.M for mi in m)

    def mode_of_frequency(self, xi: Tuple[float, float, float]) -> Tuple[int, int, int]:
        """Signed mode triple of a lattice frequency, rejecting off-lattice values"""
        m = tuple(int(round(x * self.R)) for x in xi)
        if any(abs(mi - x * self.R) > 1e-9 for mi, x in zip(m, xi)):
            raise GridError(f"frequency {xi} is not on the 1/{self.R} lattice")
        return m

    def describe(self) -> Dict[str, float]:
        return {
            "M": self.M,
            "R": self.R,
            "dealias_fraction": self.dealias_fraction,
            "period": self.period,
        }


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time nodes t_m = m*dt on [0, T]"""
    horizon: float
    nodes: int

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.nodes < 2:
            raise ValueError(f"a time grid needs at least 2 nodes, got {self.nodes}")

    @property
    def dt(self) -> float:
        return self.horizon / (self.nodes - 1)

    @cached_property
    def times(self) -> np.ndarray:
        return np.arange(self.nodes) * self.dt

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Grid with every interval split into ``factor`` pieces"""
        return TimeGrid(self.horizon, (self.nodes - 1) * factor + 1)

    def prefix(self, nodes: int) -> "TimeGrid":
        """First ``nodes`` nodes as a grid of their own"""
        if not 2 <= nodes <= self.nodes:
            raise HorizonError(f"prefix of {nodes} nodes outside [2, {self.nodes}]")
        return TimeGrid((nodes - 1) * self.dt, nodes)

    def node_at_or_before(self, t: float) -> int:
        if t > self.horizon * (1.0 + 1e-12):
            raise HorizonError(f"time {t} beyond horizon {self.horizon}")
        return int(min(self.nodes - 1, math.floor(t / self.dt + 1e-9)))

    def nearest_node(self, t: float) -> int:
        if t > self.horizon * (1.0 + 1e-12) or t < 0:
            raise HorizonError(f"time {t} outside [0, {self.horizon}]")
        return int(round(t / self.dt))

    def describe(self) -> Dict[str, float]:
        return {"T": self.horizon, "M_t": self.nodes}


def _check_finite(values: np.ndarray, what: str):
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} contains non-finite values")


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Unitary DFT coefficients of a function on the periodic box"""
    grid: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=np.complex128)
        if coefficients.shape != self.grid.shape:
            raise GridError(
                f"coefficient array has shape {coefficients.shape}, expected {self.grid.shape}"
            )
        _check_finite(coefficients, "SpectralField")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @classmethod
    def plane_wave(cls, grid: GridSpec, mode: Tuple[int, int, int], amplitude: complex = 1.0) -> "SpectralField":
        """a * exp(i x.xi) with xi = mode/R"""
        coefficients = np.zeros(grid.shape, dtype=np.complex128)
        coefficients[grid.index_of(mode)] = amplitude * grid.M ** 1.5
        return cls(grid, coefficients)

    def _same_grid(self, other: "SpectralField"):
        if self.grid != other.grid:
            raise GridMismatchError(f"grid {self.grid} differs from {other.grid}")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._same_grid(other)
        return SpectralField(self.grid, self.coefficients + other.coefficients)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._same_grid(other)
        return SpectralField(self.grid, self.coefficients - other.coefficients)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coefficients)

    def conjugate(self) -> "SpectralField":
        """Spectral representation of the pointwise complex conjugate"""
        return SpectralField(self.grid, conjugate_coefficients(self.coefficients))

    def to_physical(self) -> np.ndarray:
        return inverse_transform(self)

    def allclose(self, other: "SpectralField", atol: float = 1e-12) -> bool:
        self._same_grid(other)
        return bool(np.allclose(self.coefficients, other.coefficients, rtol=0.0, atol=atol))


def conjugate_coefficients(coefficients: np.ndarray) -> np.ndarray:
    """Coefficients of conj(u): c(xi) -> conj(c(-xi)) on the last three axes"""
    flipped = np.flip(np.conj(coefficients), axis=(-3, -2, -1))
    return np.roll(flipped, shift=(1, 1, 1), axis=(-3, -2, -1))


def forward_transform(samples: np.ndarray, grid: GridSpec) -> SpectralField:
    """
    Unitary forward DFT of physical samples

    Args:
        samples: Array of M^3 values on the grid (any shape reshapeable to M^3)
        grid: Grid the samples live on

    Returns:
        SpectralField with coefficients in DFT-standard order
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.size != grid.M ** 3:
        raise GridError(f"expected {grid.M ** 3} samples, got {samples.size}")
    return SpectralField(grid, sfft.fftn(samples.reshape(grid.shape), norm="ortho"))


def inverse_transform(f: SpectralField) -> np.ndarray:
    """Unitary inverse DFT; returns physical samples of shape (M, M, M)"""
    return sfft.ifftn(f.coefficients, norm="ortho")


@dataclass(frozen=True, eq=False)
class FieldTrajectory:
    """Spectral snapshots on a uniform time grid, array shape (M_t, M, M, M)"""
    grid: GridSpec
    time_grid: TimeGrid
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128)
        expected = (self.time_grid.nodes,) + self.grid.shape
        if data.shape != expected:
            raise GridError(f"trajectory data has shape {data.shape}, expected {expected}")
        _check_finite(data, "FieldTrajectory")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, grid: GridSpec, time_grid: TimeGrid) -> "FieldTrajectory":
        return cls(grid, time_grid, np.zeros((time_grid.nodes,) + grid.shape, dtype=np.complex128))

    @classmethod
    def from_snapshots(cls, snapshots: List[SpectralField], time_grid: TimeGrid) -> "FieldTrajectory":
        if len(snapshots) != time_grid.nodes:
            raise GridError(f"{len(snapshots)} snapshots for {time_grid.nodes} time nodes")
        grid = snapshots[0].grid
        for snap in snapshots:
            if snap.grid != grid:
                raise GridMismatchError("all snapshots must share one grid")
        return cls(grid, time_grid, np.stack([s.coefficients for s in snapshots]))

    def __len__(self) -> int:
        return self.time_grid.nodes

    def snapshot(self, m: int) -> SpectralField:
        return SpectralField(self.grid, self.data[m])

    @property
    def snapshots(self) -> Iterator[SpectralField]:
        for m in range(len(self)):
            yield self.snapshot(m)

    def at_time(self, t: float) -> SpectralField:
        """Snapshot at the node nearest to t"""
        return self.snapshot(self.time_grid.nearest_node(t))

    def restricted(self, horizon: float) -> "FieldTrajectory":
        """Trajectory on the nodes t_m <= horizon"""
        count = self.time_grid.node_at_or_before(horizon) + 1
        return FieldTrajectory(self.grid, self.time_grid.prefix(count), self.data[:count])

    def check_compatible(self, other: "FieldTrajectory"):
        if self.grid != other.grid:
            raise GridMismatchError(f"grid {self.grid} differs from {other.grid}")
        if self.time_grid != other.time_grid:
            raise GridMismatchError(f"time grid {self.time_grid} differs from {other.time_grid}")

    def __add__(self, other: "FieldTrajectory") -> "FieldTrajectory":
        self.check_compatible(other)
        return FieldTrajectory(self.grid, self.time_grid, self.data + other.data)

    def __sub__(self, other: "FieldTrajectory") -> "FieldTrajectory":
        self.check_compatible(other)
        return FieldTrajectory(self.grid, self.time_grid, self.data - other.data)

    def __mul__(self, scalar: complex) -> "FieldTrajectory":
        return FieldTrajectory(self.grid, self.time_grid, self.data * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldTrajectory":
        return FieldTrajectory(self.grid, self.time_grid, -self.data)


@dataclass(frozen=True)
class DyadicProfile:
    """Ordered map N -> block norm over dyadic N = 1, 2, 4, ..."""
    values: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        keys = list(self.values)
        for a, b in zip(keys, keys[1:]):
            if not b > a:
                raise ValueError("dyadic keys must be strictly increasing")
        for key, value in self.values.items():
            if key < 1 or (key & (key - 1)) != 0:
                raise ValueError(f"dyadic key {key} is not a power of two")
            if value < 0 or not math.isfinite(value):
                raise ValueError(f"profile value at N={key} must be finite and >= 0")

    @property
    def scales(self) -> np.ndarray:
        return np.array(list(self.values), dtype=float)

    @property
    def norms(self) -> np.ndarray:
        return np.array(list(self.values.values()), dtype=float)

    def l2_sum(self) -> float:
        """(sum_N value_N^2)^(1/2)"""
        return float(np.sqrt(np.sum(self.norms ** 2)))

    def restricted(self, n_min: float, n_max: float) -> "DyadicProfile":
        return DyadicProfile({n: v for n, v in self.values.items() if n_min <= n <= n_max})
