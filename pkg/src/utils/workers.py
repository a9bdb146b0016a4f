import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

logger = logging.getLogger("HeinzConstants.Workers")

THREADS_ENV = "HEINZ_THREADS"
DEFAULT_MAX_THREADS = 8

T = TypeVar("T")
R = TypeVar("R")

def worker_count() -> int:
    """Number of worker threads, capped by ``HEINZ_THREADS`` if set.

    Returns:
        int: At least 1
    """
    default = min(os.cpu_count() or 1, DEFAULT_MAX_THREADS)
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring invalid {THREADS_ENV}={raw!r}, using 1 thread")
        return 1
    if value < 1:
        logger.warning(f"{THREADS_ENV}={value} is below 1, using 1 thread")
        return 1
    return value

def chunk_generators(seed: int, chunks: int) -> List[np.random.Generator]:
    """Independent PCG64 generators, one per chunk, spawned from ``seed``.

    The i-th generator depends only on ``seed`` and ``i``, never on how
    chunks are distributed over threads.
    """
    children = np.random.SeedSequence(seed).spawn(chunks)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]

def ordered_map(func: Callable[[T], R], items: Sequence[T], threads: int = None) -> List[R]:
    """Apply ``func`` to every item, in parallel, keeping input order."""
    threads = threads or worker_count()
    if threads == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
