"""Smoothing exponents alpha_k and regularity thresholds in exact arithmetic"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Union

from ..utils.errors import ExpansionError

logger = logging.getLogger(__name__)

Real = Union[float, Fraction]


@lru_cache(maxsize=None)
def alpha(k: int) -> Fraction:
    """alpha_1 = 1, alpha_k = (alpha_(k-1) + 3) / 2"""
    if k < 1:
        raise ValueError(f"alpha is defined for k >= 1, got {k}")
    value = Fraction(1)
    for _ in range(k - 1):
        value = (value + 3) / 2
    return value


def alpha_closed_form(k: int) -> Fraction:
    """alpha_k = 2 (1 - 2^(1-k)) + 1"""
    if k < 1:
        raise ValueError(f"alpha is defined for k >= 1, got {k}")
    return 2 * (1 - Fraction(1, 2 ** (k - 1))) + 1


def alpha_sequence(count: int) -> List[Fraction]:
    return [alpha(k) for k in range(1, count + 1)]


def scaling_critical_regularity() -> Fraction:
    """H-dot^(1/2) is invariant under u -> lam u(lam^2 t, lam x)"""
    return Fraction(1, 2)


def s_infinity() -> Fraction:
    """Limit of the thresholds 1/(2 alpha_k) as k -> infinity"""
    return Fraction(1, 6)


def threshold(k: int) -> Fraction:
    """Upper end of the s-range served by depth k: 1/(2 alpha_k)"""
    return 1 / (2 * alpha(k))


@dataclass(frozen=True)
class SigmaPrediction:
    """Supremal predicted regularity alpha_k s; in_range is False outside 0 < s < 1/alpha_(k-1)"""
    value: float
    in_range: bool


def predicted_sigma(k: int, s: Real) -> SigmaPrediction:
    """
    Supremal regularity of the order 2k-1 unbalanced term for data in H^s

    Args:
        k: Depth index
        s: Data regularity

    Returns:
        alpha_k s with a flag marking s outside the hypothesis range
    """
    s = Fraction(s)
    upper: Optional[Fraction] = 1 / alpha(k - 1) if k >= 2 else None
    in_range = s > 0 and (upper is None or s < upper)
    if not in_range:
        logger.warning(f"s={float(s)} outside 0 < s < 1/alpha_{k - 1} for k={k}")
    return SigmaPrediction(float(alpha(k) * s), in_range)


def step_count_for(s: Real, max_depth: int = 256) -> int:
    """
    Depth k with 1/(2 alpha_(k+1)) < s <= 1/(2 alpha_k)

    Raises:
        ExpansionError: for s <= 1/6 or s >= 1/2
    """
    s = Fraction(s)
    if s <= s_infinity():
        raise ExpansionError(f"s={float(s)} is at or below s_infinity = 1/6")
    if s >= scaling_critical_regularity():
        raise ExpansionError(f"s={float(s)} is not below the critical regularity 1/2")
    for k in range(1, max_depth + 1):
        if threshold(k + 1) < s <= threshold(k):
            return k
    raise ExpansionError(f"no depth <= {max_depth} brackets s={float(s)}")


@dataclass(frozen=True)
class RegularityParams:
    """Data regularity s, target regularity sigma and expansion depth k"""
    s: float
    sigma: float = 0.5
    k: int = 1

    def __post_init__(self):
        if not 0.0 < self.s < 0.5:
            raise ValueError(f"s must lie in (0, 1/2), got {self.s}")
        if not 0.5 <= self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in [1/2, 1], got {self.sigma}")
        if self.k < 1:
            raise ValueError(f"depth k must be >= 1, got {self.k}")

    @classmethod
    def auto(cls, s: float, sigma: float = 0.5) -> "RegularityParams":
        """Depth resolved from s"""
        return cls(s=s, sigma=sigma, k=step_count_for(s))

    @property
    def alpha(self) -> Fraction:
        return alpha(self.k)

    @property
    def bracket_ok(self) -> bool:
        """True when k is the depth whose bracket contains s"""
        if self.s <= float(s_infinity()):
            return False
        return self.k == step_count_for(self.s)
