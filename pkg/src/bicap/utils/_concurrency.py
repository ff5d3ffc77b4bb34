"""Ordered thread-pool mapping."""

__all__ = ["parallel_map"]

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from bicap.setup_package import MAX_THREADS

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R], items: Iterable[T], /, *, max_workers: int | None = None
) -> list[R]:
    """Map ``func`` over ``items`` on a thread pool, keeping input order.

    The pool size is capped by ``BICAP_THREADS``. With a single worker (or a
    single item) the map runs inline.

    Examples
    --------
    >>> from bicap.utils import parallel_map
    >>> parallel_map(lambda x: x * x, range(5))
    [0, 1, 4, 9, 16]

    """
    items = list(items)
    workers = min(max_workers or MAX_THREADS, MAX_THREADS, max(len(items), 1))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
