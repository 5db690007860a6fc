"""Optional thread fan-out for embarrassingly parallel sweeps.

The worker count is capped by the PVMK_THREADS environment variable
(default 1, sequential).  Callers pre-derive any per-item randomness, so
results are independent of scheduling, and outputs are collected in input
order; a run is bit-identical at any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import InputParseError


def thread_count() -> int:
    raw = os.environ.get("PVMK_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise InputParseError(f"PVMK_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def parallel_map(fn, items):
    """Map preserving input order, threaded when PVMK_THREADS > 1."""
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
