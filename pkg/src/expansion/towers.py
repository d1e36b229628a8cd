"""Multilinear Duhamel expansion towers of the random linear solution"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..evolution.duhamel import Quadrature, duhamel_integral
from ..spectral.grid import FieldTrajectory, GridSpec, TimeGrid
from ..spectral.products import dealiased_product_arrays
from ..utils.errors import ExpansionError

logger = logging.getLogger(__name__)

# orders above 7 need bookkeeping for repeated high-order triples like (3, 3, 3)
FULL_Z_MAX_DEPTH = 4

Triple = Tuple[int, int, int]


class ExpansionVariant(str, Enum):
    FULL_Z = "full-z"
    UNBALANCED_ZETA = "unbalanced-zeta"


@dataclass(frozen=True, eq=False)
class ExpansionSet:
    """Expansion terms of orders 1, 3, ..., 2k-1 with generation metadata"""
    variant: ExpansionVariant
    terms: Tuple[FieldTrajectory, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variant", ExpansionVariant(self.variant))
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ExpansionError("an expansion set needs at least the linear term")
        first = self.terms[0]
        for term in self.terms[1:]:
            first.check_compatible(term)

    @property
    def depth(self) -> int:
        return len(self.terms)

    @property
    def orders(self) -> List[int]:
        return [2 * j + 1 for j in range(self.depth)]

    @property
    def grid(self) -> GridSpec:
        return self.terms[0].grid

    @property
    def time_grid(self) -> TimeGrid:
        return self.terms[0].time_grid

    @property
    def linear_solution(self) -> FieldTrajectory:
        return self.terms[0]

    def term(self, order: int) -> FieldTrajectory:
        if order < 1 or order % 2 == 0 or order > 2 * self.depth - 1:
            raise ExpansionError(f"order {order} not in {self.orders}")
        return self.terms[(order - 1) // 2]

    def as_dict(self) -> Dict[int, FieldTrajectory]:
        return dict(zip(self.orders, self.terms))

    def truncated(self, depth: int) -> "ExpansionSet":
        if not 1 <= depth <= self.depth:
            raise ExpansionError(f"cannot truncate depth {self.depth} set to {depth}")
        return ExpansionSet(self.variant, self.terms[:depth], dict(self.metadata))

    def restricted(self, horizon: float) -> "ExpansionSet":
        """Same terms on the nodes t_m <= horizon"""
        return ExpansionSet(self.variant, tuple(t.restricted(horizon) for t in self.terms), dict(self.metadata))

    def total(self) -> FieldTrajectory:
        """Sum of all terms"""
        data = np.sum([t.data for t in self.terms], axis=0)
        return FieldTrajectory(self.grid, self.time_grid, data)

    def to_manifest(self) -> Dict[str, Any]:
        return {
            "variant": self.variant.value,
            "orders": self.orders,
            "grid": self.grid.describe(),
            "time_grid": self.time_grid.describe(),
            **self.metadata,
        }


def ordered_triples(order: int, allowed: Iterable[int]) -> List[Triple]:
    """All ordered (j1, j2, j3) from ``allowed`` with j1 + j2 + j3 = order, lexicographic"""
    allowed = sorted(set(allowed))
    return [t for t in itertools.product(allowed, repeat=3) if sum(t) == order]


def _trilinear_sum(terms: Dict[int, FieldTrajectory], triples: Sequence[Triple]) -> FieldTrajectory:
    """sum over triples of z_j1 conj(z_j2) z_j3 at every node"""
    first = terms[triples[0][0]]
    data = np.zeros((first.time_grid.nodes,) + first.grid.shape, dtype=np.complex128)
    for j1, j2, j3 in triples:
        data += dealiased_product_arrays(
            first.grid,
            lambda a, b, c: a * np.conj(b) * c,
            terms[j1].data, terms[j2].data, terms[j3].data,
        )
    return FieldTrajectory(first.grid, first.time_grid, data)


def build_z_terms(
    z1: FieldTrajectory,
    k_max: int,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
    metadata: Optional[Dict[str, Any]] = None,
) -> ExpansionSet:
    """
    Full tower z_1, z_3, ..., z_(2k_max - 1)

    z_(2k+1) = -i int S(t - t') sum z_j1 conj(z_j2) z_j3 over ordered odd
    triples with j1 + j2 + j3 = 2k + 1.

    Raises:
        ExpansionError: for k_max above the supported depth
    """
    if not 1 <= k_max <= FULL_Z_MAX_DEPTH:
        raise ExpansionError(f"full-z tower supports 1 <= k_max <= {FULL_Z_MAX_DEPTH}, got {k_max}")
    terms: Dict[int, FieldTrajectory] = {1: z1}
    for k in range(1, k_max):
        order = 2 * k + 1
        triples = ordered_triples(order, terms.keys())
        logger.debug(f"z_{order}: {len(triples)} ordered triples")
        terms[order] = duhamel_integral(_trilinear_sum(terms, triples), quadrature)
    meta = {"quadrature": Quadrature(quadrature).value, **(metadata or {})}
    return ExpansionSet(ExpansionVariant.FULL_Z, tuple(terms[o] for o in sorted(terms)), meta)


def _unbalanced_product(z1: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    return 2.0 * z1 * np.conj(z1) * zeta + z1 * z1 * np.conj(zeta)


def zeta_forcing(z1: FieldTrajectory, previous: FieldTrajectory, level: int) -> FieldTrajectory:
    """
    Integrand of zeta_(2 level - 1)

    level 2 has the single triple (1, 1, 1); higher levels fuse the three
    distinct orderings of (1, 1, 2 level - 3) into 2|z1|^2 zeta + z1^2 conj(zeta).
    """
    if level == 2:
        data = dealiased_product_arrays(z1.grid, lambda a: a * np.conj(a) * a, z1.data)
    else:
        data = dealiased_product_arrays(z1.grid, _unbalanced_product, z1.data, previous.data)
    return FieldTrajectory(z1.grid, z1.time_grid, data)


def build_zeta_terms(
    z1: FieldTrajectory,
    k_max: int,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
    metadata: Optional[Dict[str, Any]] = None,
) -> ExpansionSet:
    """Unbalanced tower zeta_1 = z_1, zeta_3, ..., zeta_(2k_max - 1)"""
    if k_max < 1:
        raise ExpansionError(f"k_max must be >= 1, got {k_max}")
    terms = [z1]
    for level in range(2, k_max + 1):
        terms.append(duhamel_integral(zeta_forcing(z1, terms[-1], level), quadrature))
    meta = {"quadrature": Quadrature(quadrature).value, **(metadata or {})}
    return ExpansionSet(ExpansionVariant.UNBALANCED_ZETA, tuple(terms), meta)


def forcing_sum(expansion: ExpansionSet, k: Optional[int] = None) -> FieldTrajectory:
    """
    Nonlinear forcing carried by the expansion terms up to depth k

    sum over levels 2..k of the integrands that generated each term;
    removing it from |u|^2 u leaves the residual equation.

    Raises:
        ExpansionError: for full-z sets beyond depth 2 or k above the set depth
    """
    k = expansion.depth if k is None else k
    if k > expansion.depth:
        raise ExpansionError(f"depth {k} exceeds the set depth {expansion.depth}")
    if expansion.variant is ExpansionVariant.FULL_Z and k > 2:
        raise ExpansionError("full-z residual forcing is supported only for k <= 2")

    z1 = expansion.linear_solution
    total = np.zeros((z1.time_grid.nodes,) + z1.grid.shape, dtype=np.complex128)
    for level in range(2, k + 1):
        total += zeta_forcing(z1, expansion.term(2 * level - 3), level).data
    return FieldTrajectory(z1.grid, z1.time_grid, total)


def expansion_pieces(
    expansion: ExpansionSet,
    pattern: Triple,
    quadrature: Optional[Quadrature] = None,
) -> FieldTrajectory:
    """
    Duhamel term of the distinct orderings of one multiset of orders

    For pattern (1, 3, 3) this is the part of z_7 the unbalanced tower drops.
    """
    quadrature = quadrature or expansion.metadata.get("quadrature", Quadrature.TRAPEZOID)
    triples = sorted(set(itertools.permutations(pattern)))
    return duhamel_integral(_trilinear_sum(expansion.as_dict(), triples), quadrature)
