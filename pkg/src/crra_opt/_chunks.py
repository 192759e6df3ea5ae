"""Deterministic chunked reductions over scenario rows.

Large per-scenario sums are accumulated over fixed-size row chunks in index
order.  Chunk boundaries never depend on the worker count, so results are
bit-identical whether the chunks run on one thread or many.  The worker pool
size is capped by the ``CRRA_OPT_THREADS`` environment variable (default 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

CHUNK_ROWS = 65536


def worker_count() -> int:
    """Worker cap from CRRA_OPT_THREADS; malformed or missing values mean 1."""
    raw = os.environ.get("CRRA_OPT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def row_slices(n: int) -> list[slice]:
    return [slice(lo, min(lo + CHUNK_ROWS, n)) for lo in range(0, n, CHUNK_ROWS)]


def chunked_sum(fn: Callable[[slice], np.ndarray], n: int):
    """Sum ``fn(chunk)`` over the fixed chunking of ``range(n)``.

    ``fn`` must return a scalar or array partial sum for the given slice.
    Partials are combined strictly in chunk order.
    """
    slices = row_slices(n)
    workers = worker_count()
    if workers > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, slices))
    else:
        parts = [fn(s) for s in slices]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total
