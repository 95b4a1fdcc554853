"""Order-preserving map over worker processes.

Results always come back in input order, so sweeps are reproducible no
matter how many workers run them.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

_CONTEXT: Any = None


def _init(context) -> None:
    global _CONTEXT
    _CONTEXT = context


def _call(job):
    fn, item = job
    return fn(item, _CONTEXT)


def parallel_map(fn: Callable, items: Sequence, context: Any, workers: int = 1) -> list:
    """``[fn(item, context) for item in items]``, optionally across processes.

    ``fn`` must be a module-level function so it can be pickled.
    """
    if workers <= 1 or len(items) < 2:
        return [fn(item, context) for item in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(workers, initializer=_init, initargs=(context,)) as pool:
        return list(pool.map(_call, [(fn, item) for item in items], chunksize=chunk))
