"""Chunked thread-pool execution for pulse/pixel loops.

numpy releases the GIL inside large array kernels, so plain threads
give usable parallelism here.  Chunk boundaries depend only on the
item count, never on the thread count, and workers write disjoint
output slices; results are therefore bit-identical for any number of
threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def resolve_threads(n_threads: int | None) -> int:
    if n_threads is None or n_threads <= 0:
        return os.cpu_count() or 1
    return n_threads


def map_chunks(
    worker: Callable[[int, int], T],
    n_items: int,
    chunk: int,
    n_threads: int | None = None,
) -> Sequence[T]:
    """Run worker(start, stop) over consecutive chunks of range(n_items)."""
    if n_items < 0 or chunk < 1:
        raise ValueError("n_items must be >= 0 and chunk >= 1")
    bounds = [(s, min(s + chunk, n_items)) for s in range(0, n_items, chunk)]
    threads = resolve_threads(n_threads)
    if threads == 1 or len(bounds) <= 1:
        return [worker(s, e) for s, e in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda se: worker(*se), bounds))
