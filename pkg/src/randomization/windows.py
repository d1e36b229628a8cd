"""Wiener cube windows forming a partition of unity over the frequency lattice"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from ..spectral.grid import GridSpec


class WindowKind(str, Enum):
    SHARP_CUBE = "sharp-cube"
    SMOOTH_BUMP = "smooth-bump"


@dataclass(frozen=True)
class WindowSpec:
    """
    Unit-cube window psi with sum_n psi(xi - n) = 1.

    sharp-cube is the indicator of (-1/2, 1/2]^3. smooth-bump is a tensor
    product of 1D windows that equal 1 on |x| <= 1/2 - w, vanish on
    |x| >= 1/2 + w and follow the quintic smootherstep across each face.
    """
    kind: WindowKind = WindowKind.SHARP_CUBE
    width: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "kind", WindowKind(self.kind))
        if self.kind is WindowKind.SMOOTH_BUMP and not (0.0 < self.width < 0.5):
            raise ValueError(f"smooth-bump transition width must lie in (0, 1/2), got {self.width}")

    @property
    def offsets(self) -> Tuple[int, ...]:
        """Neighbour cubes per axis that can overlap a point's home cube"""
        return (0,) if self.kind is WindowKind.SHARP_CUBE else (-1, 0, 1)

    def to_dict(self):
        return {"kind": self.kind.value, "width": self.width}


def _smootherstep(y: np.ndarray) -> np.ndarray:
    """C^2 step with h(y) + h(1 - y) = 1"""
    y = np.clip(y, 0.0, 1.0)
    return y ** 3 * (y * (6.0 * y - 15.0) + 10.0)


def axis_weight(x: np.ndarray, spec: WindowSpec) -> np.ndarray:
    """One-dimensional window profile evaluated at offsets x = xi_axis - n_axis"""
    x = np.asarray(x, dtype=float)
    if spec.kind is WindowKind.SHARP_CUBE:
        return ((x > -0.5) & (x <= 0.5)).astype(float)
    w = spec.width
    return _smootherstep((0.5 + w - np.abs(x)) / (2.0 * w))


def window_weight(xi: Sequence[float], n: Sequence[int], spec: WindowSpec) -> float:
    """psi(xi - n) for one frequency and one integer lattice point"""
    return float(np.prod([axis_weight(x - m, spec) for x, m in zip(xi, n)]))


def home_cubes(grid: GridSpec) -> np.ndarray:
    """Integer cube coordinate n with m/R - n in (-1/2, 1/2], per axis mode"""
    m = grid.mode_indices
    R = grid.R
    # ceil((2m - R) / 2R) in integer arithmetic
    return -((R - 2 * m) // (2 * R))


def axis_pieces(grid: GridSpec, spec: WindowSpec) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Per-axis (cube index, weight) arrays for every neighbour offset"""
    n0 = home_cubes(grid)
    k = grid.axis_frequencies
    return [(n0 + d, axis_weight(k - (n0 + d), spec)) for d in spec.offsets]


def cube_pieces(grid: GridSpec, spec: WindowSpec):
    """
    Decompose the lattice into weighted cube contributions

    Yields:
        ((nx, ny, nz), weight): per-axis cube indices (M,) and the
        broadcast (M, M, M) weight psi(xi - n) for one neighbour offset
    """
    pieces = axis_pieces(grid, spec)
    for nx, wx in pieces:
        for ny, wy in pieces:
            for nz, wz in pieces:
                weight = wx[:, None, None] * wy[None, :, None] * wz[None, None, :]
                if np.any(weight):
                    yield (nx, ny, nz), weight


def partition_error(grid: GridSpec, spec: WindowSpec) -> float:
    """Max deviation of sum_n psi(xi - n) from 1 on the lattice"""
    total = np.zeros(grid.shape)
    for _, weight in cube_pieces(grid, spec):
        total += weight
    return float(np.abs(total - 1.0).max())
