"""Replica fan-out keyed by stream id.

Results always come back in replica order, so the worker count never changes
an aggregate.
"""
from __future__ import annotations

import numpy as np
from joblib import Parallel, delayed


def _run_chunk(func, ids):
    return [func(i) for i in ids]


def run_replicas(func, n_replicas: int, *, workers: int = 1, first: int = 0) -> list:
    """Evaluate ``func(stream_id)`` for ``stream_id = first, ..., first + n_replicas - 1``.

    ``func`` must derive all randomness from the stream id it is handed. With
    ``workers > 1`` the id range is split into contiguous blocks and evaluated
    in separate processes.
    """
    ids = list(range(first, first + n_replicas))
    if workers <= 1 or n_replicas < 2:
        return [func(i) for i in ids]
    blocks = [b.tolist() for b in np.array_split(np.array(ids), min(workers, n_replicas))]
    parts = Parallel(n_jobs=workers)(delayed(_run_chunk)(func, b) for b in blocks)
    return [r for part in parts for r in part]
