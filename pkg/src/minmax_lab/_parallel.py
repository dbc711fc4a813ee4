"""Optional thread fan-out for independent numeric tasks.

Every task in this package is a pure function of its inputs plus explicit
seeds, and reductions (min/max over results) are order-independent, so
threading never changes results.  MINMAX_LAB_THREADS caps the pool; the
default of 1 keeps runs single-threaded.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("MINMAX_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_ordered(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Apply fn to each item, preserving input order in the result list."""
    workers = min(thread_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
