"""Chunked, optionally parallel evaluation over path indices.

Work is split into fixed chunks of path indices and results are merged in
chunk order, so output never depends on the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .model import PathBatch

CHUNK = 1 << 16


def default_workers():
    try:
        return max(1, int(os.environ.get("BELAB_WORKERS", "1")))
    except ValueError:
        return 1


def _call(fn, bounds):
    return fn(*bounds)


def map_chunks(fn, total, workers=1, chunk=CHUNK):
    """[fn(start, count) for each chunk], in chunk order."""
    bounds = [(lo, min(chunk, total - lo)) for lo in range(0, total, chunk)]
    if workers <= 1 or len(bounds) == 1:
        return [fn(*b) for b in bounds]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(partial(_call, fn), bounds))


def merge(parts):
    if parts and isinstance(parts[0], PathBatch):
        return PathBatch.concat(parts)
    return np.concatenate(parts)
