"""Mean-zero unit-variance coefficient laws"""

import logging
import math
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy import special

logger = logging.getLogger(__name__)


class RandomLaw(str, Enum):
    COMPLEX_GAUSSIAN = "complex-gaussian"
    UNIFORM_CIRCLE = "uniform-circle"


def sample_unit(law: RandomLaw, stream: np.random.Generator) -> complex:
    """
    Draw one mean-zero coefficient with E|g|^2 = 1

    Args:
        law: Coefficient law
        stream: Generator the draw consumes

    Returns:
        Complex sample; uniform-circle samples have modulus 1
    """
    law = RandomLaw(law)
    if law is RandomLaw.COMPLEX_GAUSSIAN:
        re, im = stream.standard_normal(2)
        return complex(re, im) / math.sqrt(2.0)
    theta = stream.uniform(0.0, 2.0 * math.pi)
    return complex(math.cos(theta), math.sin(theta))


def sample_units(law: RandomLaw, stream: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized sample_unit"""
    law = RandomLaw(law)
    if law is RandomLaw.COMPLEX_GAUSSIAN:
        draws = stream.standard_normal((size, 2))
        return (draws[:, 0] + 1j * draws[:, 1]) / math.sqrt(2.0)
    return np.exp(1j * stream.uniform(0.0, 2.0 * math.pi, size))


def exact_exponential_moment(law: RandomLaw, kappa: complex) -> float:
    """E exp(kappa . g) with kappa . g = Re(kappa) Re(g) + Im(kappa) Im(g)"""
    law = RandomLaw(law)
    if law is RandomLaw.COMPLEX_GAUSSIAN:
        return math.exp(abs(kappa) ** 2 / 4.0)
    return float(special.i0(abs(kappa)))


def exponential_moment_constant(
    law: RandomLaw,
    kappas: Sequence[complex],
    samples: int = 100_000,
    seed: int = 0,
    stream: Optional[np.random.Generator] = None,
) -> float:
    """
    Estimate the smallest c with E exp(kappa . g) <= exp(c |kappa|^2) over a kappa grid

    Args:
        law: Coefficient law
        kappas: Nonzero complex test vectors
        samples: Monte-Carlo sample count
        seed: Seed when no stream is given

    Returns:
        max over kappa of log(sample moment) / |kappa|^2
    """
    law = RandomLaw(law)
    stream = stream or np.random.default_rng(seed)
    g = sample_units(law, stream, samples)
    worst = -math.inf
    for kappa in kappas:
        kappa = complex(kappa)
        if kappa == 0:
            continue
        moment = float(np.mean(np.exp(kappa.real * g.real + kappa.imag * g.imag)))
        worst = max(worst, math.log(moment) / abs(kappa) ** 2)
    logger.debug(f"Exponential moment constant for {law.value}: {worst:.4f}")
    return worst
