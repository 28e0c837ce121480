"""
Order-preserving parallel map for sweeps over t-grids and m-ranges.
"""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from taulab.config import settings

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    max_workers: int | None = None,
) -> list[R]:
    """
    Apply ``fn`` to every item, possibly concurrently, returning results in input order.

    Args:
        fn: Pure function of one item
        items: Items to process
        max_workers: Pool size (defaults to settings.max_workers; 1 means sequential)

    Returns:
        List of results aligned with ``items``
    """
    workers = max_workers if max_workers is not None else settings.max_workers
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        # Executor.map yields in submission order regardless of completion order
        return list(pool.map(fn, items))
