"""Fixed-size chunking of trial ranges with exact integer reduction."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

CHUNK_TRIALS = 1 << 16


def chunk_ranges(total: int, chunk: int = CHUNK_TRIALS) -> list[tuple[int, int]]:
    return [(start, min(chunk, total - start)) for start in range(0, total, chunk)]


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return 1
    if workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError("workers must be non-negative")
    return workers


def sum_over_chunks(kernel: Callable[[int, int], Sequence[int]], total: int,
                    workers: int | None = None) -> list[int]:
    """Apply ``kernel(start, count)`` to every chunk and add the integer tuples.

    Chunk boundaries do not depend on ``workers`` and the sums are Python
    ints, so the result is identical for any degree of parallelism.
    """
    ranges = chunk_ranges(total)
    n = resolve_workers(workers)
    if n == 1 or len(ranges) < 2:
        parts = [kernel(s, c) for s, c in ranges]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(lambda r: kernel(*r), ranges))
    if not parts:
        return []
    return [sum(int(p[i]) for p in parts) for i in range(len(parts[0]))]
