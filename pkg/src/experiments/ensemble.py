"""Per-member evaluation of randomized ensembles"""

import logging
from typing import Any, Callable, List

import numpy as np

from ..randomization.windows import WindowSpec
from ..randomization.wiener import EnsembleSpec, wiener_randomize
from ..spectral.grid import SpectralField
from ..utils.parallel import run_members

logger = logging.getLogger(__name__)


def _evaluate_member(func, phi, window, law, seed, member, args):
    return func(wiener_randomize(phi, window, law, seed, member), *args)


def ensemble_map(
    func: Callable[..., Any],
    phi: SpectralField,
    window: WindowSpec,
    ensemble: EnsembleSpec,
    *args: Any,
    workers: int = 1,
) -> List[Any]:
    """
    func(phi^omega_i, *args) for every member i, in member order

    Args:
        func: Module-level (picklable) function of the randomized data
        phi: Deterministic data
        window: Wiener window family
        ensemble: Law, master seed and member count
        workers: Worker processes

    Returns:
        Results ordered by member index, independent of ``workers``
    """
    logger.info(f"Evaluating {ensemble.count} members with {workers} worker(s)")
    jobs = [
        (func, phi, window, ensemble.law, ensemble.master_seed, member, args)
        for member in range(ensemble.count)
    ]
    return run_members(_evaluate_member, jobs, workers)


def quartiles(samples: np.ndarray) -> np.ndarray:
    """25th, 50th and 75th percentiles along the member axis"""
    return np.percentile(np.asarray(samples, dtype=float), [25.0, 50.0, 75.0], axis=0)
