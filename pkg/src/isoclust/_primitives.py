"""Deterministic data-parallel building blocks.

Reductions and scans here combine elements in a fixed balanced-tree order:
the input is padded to a power of two and adjacent pairs are folded level
by level. Because the combination tree depends only on the input length,
results are bit-identical no matter how many workers execute the chunks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

import numpy as np

WORKERS_ENV_VAR = "ISOCLUST_WORKERS"

# Leaf-block width for chunked tree folds. A power of two, so every chunk
# is a complete subtree of the global combination tree and chunked results
# match the unchunked fold bit for bit.
_REDUCE_BLOCK = 1 << 16


def resolve_workers(workers: Optional[int] = None) -> int:
    """Pick a worker count: explicit value, else ISOCLUST_WORKERS, else cpu count."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR, "").strip()
        if env:
            try:
                workers = int(env)
            except ValueError:
                raise ValueError(
                    f"{WORKERS_ENV_VAR} must be an integer, got {env!r}"
                ) from None
        else:
            workers = os.cpu_count() or 1
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


class WorkerPool:
    """Maps a function over a fixed list of chunks with a bounded thread pool.

    The chunk decomposition is decided by problem size alone and results are
    combined in list order, so output never depends on the worker count.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = resolve_workers(workers)

    def map(self, fn: Callable, chunks: Iterable) -> list:
        chunks = list(chunks)
        if self.workers == 1 or len(chunks) <= 1:
            return [fn(c) for c in chunks]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, chunks))


def _pad_pow2(values: np.ndarray, fill) -> np.ndarray:
    size = 1 << (values.size - 1).bit_length()
    if size == values.size:
        return values
    return np.concatenate([values, np.full(size - values.size, fill, dtype=values.dtype)])


def min_reduce(values) -> tuple[float, int]:
    """Minimum value and the smallest index attaining it.

    Runs a tournament over a fixed pairing: pad to a power of two with +inf,
    then fold adjacent pairs level by level. The right element of a pair wins
    only when strictly smaller, so ties resolve to the lower index, exactly
    like a left-to-right linear scan.
    """
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"min_reduce expects a 1-d array, got shape {v.shape}")
    if v.size == 0:
        raise ValueError("min_reduce of an empty array")
    if not np.isfinite(v).all():
        raise ValueError("min_reduce requires finite values")
    idx = np.arange(v.size, dtype=np.int64)
    v = _pad_pow2(v, np.inf)
    idx = _pad_pow2(idx, 0)  # padding never wins: +inf loses to every finite value
    while v.size > 1:
        left_v, right_v = v[0::2], v[1::2]
        take_right = right_v < left_v
        v = np.where(take_right, right_v, left_v)
        idx = np.where(take_right, idx[1::2], idx[0::2])
    return float(v[0]), int(idx[0])


def _tree_fold_sum(v: np.ndarray) -> float:
    # v must already have power-of-two length
    while v.size > 1:
        v = v[0::2] + v[1::2]
    return float(v[0])


def sum_reduce(values, pool: Optional[WorkerPool] = None) -> float:
    """Sum by folding adjacent pairs over a fixed balanced tree.

    The pairing depends only on the input length, so the result is identical
    whether the blocks run serially or on a pool. Pairwise summation also
    keeps the roundoff error far below a left-to-right running sum.
    """
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"sum_reduce expects a 1-d array, got shape {v.shape}")
    if v.size == 0:
        raise ValueError("sum_reduce of an empty array")
    if not np.isfinite(v).all():
        raise ValueError("sum_reduce requires finite values")
    v = _pad_pow2(v, 0.0)
    if pool is not None and pool.workers > 1 and v.size > _REDUCE_BLOCK:
        # Full blocks of _REDUCE_BLOCK are complete subtrees of the global
        # fold, so folding per block and then folding the block results is
        # the same combination tree.
        starts = range(0, v.size, _REDUCE_BLOCK)
        partials = pool.map(lambda s: _tree_fold_sum(v[s:s + _REDUCE_BLOCK]), starts)
        return _tree_fold_sum(_pad_pow2(np.asarray(partials, dtype=np.float64), 0.0))
    return _tree_fold_sum(v)


def exclusive_scan(values) -> np.ndarray:
    """Exclusive prefix sum of nonnegative integers (work-efficient two-sweep).

    Example: [1, 0, 1, 1] -> [0, 1, 1, 2].
    """
    a = np.asarray(values)
    if a.ndim != 1:
        raise ValueError(f"exclusive_scan expects a 1-d array, got shape {a.shape}")
    if a.size == 0:
        return np.zeros(0, dtype=np.int64)
    if not np.issubdtype(a.dtype, np.integer):
        raise TypeError(f"exclusive_scan expects integers, got dtype {a.dtype}")
    if (a < 0).any():
        raise ValueError("exclusive_scan requires nonnegative values")
    n = a.size
    size = 1 << (n - 1).bit_length()
    buf = np.zeros(size, dtype=np.int64)
    buf[:n] = a
    # up-sweep: build partial sums over the implicit balanced tree
    step = 1
    while step < size:
        buf[2 * step - 1::2 * step] += buf[step - 1::2 * step]
        step *= 2
    # down-sweep: push prefixes back down, root cleared to the identity
    buf[-1] = 0
    step = size // 2
    while step >= 1:
        right = buf[2 * step - 1::2 * step].copy()
        left = buf[step - 1::2 * step].copy()
        buf[step - 1::2 * step] = right
        buf[2 * step - 1::2 * step] = right + left
        step //= 2
    return buf[:n]


def pairwise_row_sums(matrix: np.ndarray) -> np.ndarray:
    """Per-row balanced-tree sums of a 2-d array (same pairing as sum_reduce)."""
    m = np.ascontiguousarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"pairwise_row_sums expects a 2-d array, got shape {m.shape}")
    cols = m.shape[1]
    if cols == 0:
        return np.zeros(m.shape[0], dtype=np.float64)
    size = 1 << (cols - 1).bit_length()
    if size != cols:
        m = np.concatenate([m, np.zeros((m.shape[0], size - cols))], axis=1)
    while m.shape[1] > 1:
        m = m[:, 0::2] + m[:, 1::2]
    return m[:, 0]


def chunk_ranges(total: int, block: int) -> list[tuple[int, int]]:
    """Split range(total) into fixed-width [start, stop) blocks."""
    if block < 1:
        raise ValueError(f"block must be >= 1, got {block}")
    return [(s, min(s + block, total)) for s in range(0, max(total, 0), block)]
