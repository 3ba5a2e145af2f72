"""Deterministic fan-out over independent work items.

Worker counts change wall time only.  Work items are evaluated by a pure
function and the results are collected in submission order, so any exact
or correctly rounded reduction applied afterwards is independent of the
worker count and of scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map fn over items, preserving order; workers > 1 uses a thread pool."""
    work = list(items)
    if workers is None or workers <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
