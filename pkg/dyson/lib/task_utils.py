"""
Task batching and parallel fan-out for grid computations.

This module splits independent work items (scan grid points, alpha' candidates,
enumeration slices) into batches and runs them with joblib. It includes:
    - batch_tasks, which builds batches with a minimum size and a maximum count and
      distributes the remainder round-robin.
    - spawn_seeds, which derives independent child seeds from a master seed.
    - run_batched, which evaluates a function over items in parallel and returns
      the results in input order.
"""

from typing import Callable, List, Sequence, Tuple, TypeVar

import numpy as np
from joblib import Parallel, delayed

from dyson.lib.logging_utils import LOGGER


T = TypeVar("T")
R = TypeVar("R")


def batch_tasks(
    items: Sequence[T], max_tasks: int, min_items_in_batch: int = 1
) -> List[List[T]]:
    """
    Split items into at most `max_tasks` batches.

    Batches of `min_items_in_batch` items are taken in order until either the items
    or the task budget run out; leftover items are then dealt to the batches in a
    round-robin fashion.

    :param items: Work items, in canonical order.
    :param max_tasks: Maximum number of batches (parallel tasks).
    :param min_items_in_batch: Minimum number of items per batch.
    :return: List of batches; empty if there are no items.
    """

    if max_tasks <= 0:
        raise ValueError("`max_tasks` must be greater than 0.")
    if min_items_in_batch <= 0:
        raise ValueError("`min_items_in_batch` must be greater than 0.")
    items = list(items)
    if not items:
        return []

    batches: List[List[T]] = []
    current_index = 0
    while (
        current_index + min_items_in_batch <= len(items) and len(batches) < max_tasks
    ):
        batches.append(items[current_index : current_index + min_items_in_batch])
        current_index += min_items_in_batch

    if not batches:
        return [items]

    for i, item in enumerate(items[current_index:]):
        batches[i % len(batches)].append(item)
    return batches


def spawn_seeds(master_seed: int, count: int) -> List[int]:
    """
    Derive `count` independent 64-bit seeds from a master seed.

    :param master_seed: Master seed.
    :param count: Number of child seeds.
    :return: Child seeds, stable for a given master seed and position.
    """

    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def _run_batch(
    func: Callable[[T], R], batch: List[Tuple[int, T]]
) -> List[Tuple[int, R]]:
    return [(index, func(item)) for index, item in batch]


def run_batched(
    func: Callable[[T], R],
    items: Sequence[T],
    n_jobs: int = 1,
    min_items_in_batch: int = 1,
) -> List[R]:
    """
    Evaluate `func` on every item, in parallel batches, preserving input order.

    :param func: Picklable callable applied to each item.
    :param items: Work items.
    :param n_jobs: Maximum number of parallel workers.
    :param min_items_in_batch: Minimum number of items per worker batch.
    :return: Results aligned with `items`.
    """

    indexed = list(enumerate(items))
    batches = batch_tasks(
        indexed, max_tasks=max(1, n_jobs), min_items_in_batch=min_items_in_batch
    )
    if not batches:
        return []
    LOGGER.debug(f"Running {len(indexed)} tasks in {len(batches)} batches.")
    if len(batches) == 1:
        outputs = [_run_batch(func, batches[0])]
    else:
        outputs = Parallel(n_jobs=len(batches))(
            delayed(_run_batch)(func, batch) for batch in batches
        )
    results = [result for output in outputs for result in output]
    results.sort(key=lambda pair: pair[0])
    return [result for _, result in results]
