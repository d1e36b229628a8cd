"""Wiener randomization of initial data with counter-based per-cube draws"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .laws import RandomLaw, sample_unit
from .windows import WindowSpec, cube_pieces
from ..spectral.grid import SpectralField

logger = logging.getLogger(__name__)

Cube = Tuple[int, int, int]


@dataclass(frozen=True)
class EnsembleSpec:
    """Law, master seed and member count of a randomized ensemble"""
    law: RandomLaw = RandomLaw.COMPLEX_GAUSSIAN
    master_seed: int = 0
    count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "law", RandomLaw(self.law))
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.count < 1:
            raise ValueError(f"ensemble count must be positive, got {self.count}")

    def to_dict(self):
        return {"law": self.law.value, "master_seed": self.master_seed, "count": self.count}


def member_key(master_seed: int, member: int) -> np.ndarray:
    """128-bit Philox key of one ensemble member"""
    return np.random.SeedSequence(master_seed, spawn_key=(member,)).generate_state(2, dtype=np.uint64)


def cube_stream(key: np.ndarray, cube: Cube) -> np.random.Generator:
    """
    Generator positioned at the counter block of one Wiener cube.

    The cube coordinates occupy the three high counter words and draws
    advance the low word, so streams of distinct cubes never overlap.
    """
    counter = np.array((0,) + tuple(cube), dtype=np.int64).view(np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def cube_coefficient(law: RandomLaw, master_seed: int, member: int, cube: Cube) -> complex:
    """g_n for one cube, independent of evaluation order"""
    return sample_unit(law, cube_stream(member_key(master_seed, member), cube))


def _support_cubes(phi: SpectralField, spec: WindowSpec) -> List[Cube]:
    occupied = set()
    magnitude = np.abs(phi.coefficients)
    for (nx, ny, nz), weight in cube_pieces(phi.grid, spec):
        ix, iy, iz = np.nonzero(weight * magnitude)
        occupied.update(zip(nx[ix].tolist(), ny[iy].tolist(), nz[iz].tolist()))
    return sorted(occupied)


def occupied_cubes(phi: SpectralField, spec: Optional[WindowSpec] = None) -> List[Cube]:
    """Sorted Wiener cubes n with psi(xi - n) phi_hat(xi) != 0 somewhere"""
    return _support_cubes(phi, spec or WindowSpec())


def wiener_randomize(
    phi: SpectralField,
    spec: WindowSpec,
    law: RandomLaw,
    seed: int,
    member: int = 0,
    draws: Optional[Callable[[Cube], complex]] = None,
) -> SpectralField:
    """
    Randomize phi cube by cube: phi_hat(xi) -> sum_n g_n psi(xi - n) phi_hat(xi)

    Args:
        phi: Deterministic data
        spec: Window family
        law: Law of the g_n
        seed: Master seed of the ensemble
        member: Ensemble member index
        draws: Optional override mapping a cube to its coefficient

    Returns:
        Randomized field; bit-identical for identical arguments
    """
    cubes = _support_cubes(phi, spec)
    if draws is None:
        key = member_key(seed, member)
        coefficients: Dict[Cube, complex] = {
            cube: sample_unit(law, cube_stream(key, cube)) for cube in cubes
        }
    else:
        coefficients = {cube: complex(draws(cube)) for cube in cubes}

    out = np.zeros(phi.grid.shape, dtype=np.complex128)
    if not cubes:
        return SpectralField(phi.grid, out)

    lo = min(min(c) for c in cubes) - 1
    hi = max(max(c) for c in cubes) + 1
    table = np.zeros((hi - lo + 1,) * 3, dtype=np.complex128)
    for (a, b, c), g in coefficients.items():
        table[a - lo, b - lo, c - lo] = g

    for (nx, ny, nz), weight in cube_pieces(phi.grid, spec):
        # cubes beyond the support range carry zero weight times zero data
        ix = np.clip(nx - lo, 0, hi - lo)
        iy = np.clip(ny - lo, 0, hi - lo)
        iz = np.clip(nz - lo, 0, hi - lo)
        g = table[ix[:, None, None], iy[None, :, None], iz[None, None, :]]
        out += weight * g * phi.coefficients

    logger.debug(f"Randomized member {member} over {len(cubes)} cubes")
    return SpectralField(phi.grid, out)


def randomize_ensemble(
    phi: SpectralField,
    spec: WindowSpec,
    ensemble: EnsembleSpec,
) -> Iterator[Tuple[int, SpectralField]]:
    """Members (index, phi^omega) in index order"""
    for member in range(ensemble.count):
        yield member, wiener_randomize(phi, spec, ensemble.law, ensemble.master_seed, member)


def randomized_data(
    phi: SpectralField,
    spec: WindowSpec,
    law: RandomLaw,
    seed: int,
    member: int = 0,
    v0: Optional[SpectralField] = None,
) -> SpectralField:
    """Initial data v0 + phi^omega; the deterministic part v0 is never randomized"""
    randomized = wiener_randomize(phi, spec, law, seed, member)
    return randomized if v0 is None else v0 + randomized
