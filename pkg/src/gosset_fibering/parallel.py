"""Process-pool helpers whose results never depend on scheduling order."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")


def default_workers() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def chunked(items: Sequence[T], size: int) -> list[Sequence[T]]:
    return [items[i : i + size] for i in range(0, len(items), max(1, size))]


def run_chunks(
    worker: Callable[[Any], T],
    chunks: Iterable[Any],
    workers: int = 1,
    init: Callable[..., None] | None = None,
    initargs: tuple = (),
) -> list[T]:
    """Apply `worker` to each chunk; results come back in input order."""
    chunks = list(chunks)
    if workers <= 1 or len(chunks) <= 1:
        if init is not None:
            init(*initargs)
        return [worker(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers, initializer=init, initargs=initargs) as pool:
        return list(pool.map(worker, chunks))
