"""Deterministic chunked execution.

Work is cut into fixed-size chunks and partial results are combined in
chunk order, so any worker count (including 1) produces bit-identical
output.  Threads are enough here: the heavy lifting inside chunks is
numpy, which releases the GIL.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, Sequence, Tuple

CHUNK = 1 << 16


def chunk_bounds(lo: int, hi: int, size: int = CHUNK) -> Iterator[Tuple[int, int]]:
    """Half-open-to-closed (a, b] subranges of (lo, hi] in ascending order."""
    a = lo
    while a < hi:
        b = min(a + size, hi)
        yield a, b
        a = b


def ordered_map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """Map fn over items, preserving input order regardless of thread count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
