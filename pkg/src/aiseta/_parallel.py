"""Order-preserving parallel map over picklable work items."""

from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from aiseta._logger import logger

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Apply a function to every item, optionally across worker processes.

    Results are returned in input order, so callers get the same output for
    any worker count.

    Args:
        func: A picklable (module-level) function.
        items: The work items.
        jobs: The number of worker processes, 1 runs in-process.

    Returns:
        The results, in input order.
    """
    work = list(items)
    if jobs <= 1 or len(work) <= 1:
        return [func(item) for item in work]

    logger.debug("Dispatching %d work items to %d workers", len(work), jobs)
    chunksize = max(1, len(work) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, work, chunksize=chunksize))
