"""Worker pool and deterministic reductions for ensembles"""

import logging
from typing import Any, Callable, Iterable, List, Sequence

import numpy as np
from joblib import Parallel, delayed

logger = logging.getLogger(__name__)


def run_members(
    func: Callable[..., Any],
    jobs: Iterable[Sequence[Any]],
    workers: int = 1,
) -> List[Any]:
    """
    Evaluate func(*job) for every job, returning results in submission order

    Args:
        func: Picklable callable; must not touch shared mutable state
        jobs: Argument tuples, one per ensemble member
        workers: Number of worker processes (1 runs inline)

    Returns:
        List of results ordered like ``jobs``
    """
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        return [func(*job) for job in jobs]

    logger.debug(f"Dispatching {len(jobs)} jobs to {workers} workers")
    return Parallel(n_jobs=workers, backend="loky")(delayed(func)(*job) for job in jobs)


def pairwise_sum(values: Sequence[np.ndarray]) -> np.ndarray:
    """
    Sum arrays with a fixed binary tree so the result never depends on scheduling

    Args:
        values: Arrays of identical shape, in member order

    Returns:
        Tree-reduced sum
    """
    if not values:
        raise ValueError("pairwise_sum needs at least one value")
    level = [np.asarray(v) for v in values]
    while len(level) > 1:
        paired = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return level[0]


def pairwise_mean(values: Sequence[np.ndarray]) -> np.ndarray:
    """Mean with the fixed-tree reduction of pairwise_sum"""
    return pairwise_sum(values) / len(values)
