"""Order-preserving shard execution, in-process or on a process pool."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from .config import resolve_workers

T = TypeVar("T")
R = TypeVar("R")


def run_shards(func: Callable[[T], R], shards: Iterable[T], workers: int | None = None) -> list[R]:
    """Apply ``func`` to every shard; results come back in shard order.

    ``func`` must be a module-level callable so it can be pickled.
    """
    shards = list(shards)
    workers = resolve_workers(workers)
    if workers == 1 or len(shards) <= 1:
        return [func(s) for s in shards]
    with ProcessPoolExecutor(max_workers=min(workers, len(shards))) as pool:
        return list(pool.map(func, shards))
