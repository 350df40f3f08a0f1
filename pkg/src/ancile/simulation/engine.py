"""Replicate generation keyed by ``(seed, replicate index)``.

Work is split into contiguous blocks of replicates and may run on a thread
pool, but each replicate's data depends only on its own substream, so the
output is identical for any worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..stat_core import substream
from .alternatives import Alternative, Normal

THREADS_ENV = "ANCILE_THREADS"

_BLOCK = 2048


def worker_count(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def derive_seed(seed: int, *tags) -> int:
    """Deterministic 64-bit child seed for a labelled sub-task."""
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for t in tags:
        if isinstance(t, int):
            words.append(t & 0xFFFFFFFFFFFFFFFF)
        else:
            words.extend(str(t).encode())
    ss = np.random.SeedSequence(words)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _fill(spec: Alternative, n: int, seed: int, start: int, out: np.ndarray, offset: int) -> None:
    for i in range(out.shape[0]):
        gen = substream(seed, offset + start + i).generator()
        out[i] = spec.draw(gen, n)


def simulate_matrix(spec: Alternative, n: int, reps: int, seed: int, *, offset: int = 0,
                    threads: int | None = None) -> np.ndarray:
    """``(reps, n)`` matrix whose row ``r`` is drawn from substream ``(seed, offset + r)``."""
    out = np.empty((reps, n), dtype=np.float64)
    starts = range(0, reps, _BLOCK)
    workers = worker_count(threads)
    if workers == 1 or reps <= _BLOCK:
        for s in starts:
            _fill(spec, n, seed, s, out[s:s + _BLOCK], offset)
        return out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_fill, spec, n, seed, s, out[s:s + _BLOCK], offset)
                   for s in starts]
        for f in futures:
            f.result()
    return out


def map_blocks(func, X: np.ndarray, threads: int | None = None, block: int = _BLOCK):
    """Apply a row-wise batch function over blocks of ``X`` and concatenate.

    ``func`` must treat rows independently; the ordered concatenation keeps
    results identical for any worker count.
    """
    starts = list(range(0, X.shape[0], block))
    workers = worker_count(threads)
    if workers == 1 or len(starts) == 1:
        parts = [func(X[s:s + block]) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda s: func(X[s:s + block]), starts))
    if isinstance(parts[0], dict):
        return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    return np.concatenate(parts)


STANDARD_NORMAL = Normal(0.0, 1.0)
