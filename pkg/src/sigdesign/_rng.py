"""Deterministic block substreams for the Monte-Carlo evaluators.

Randomness is derived from (seed, block index) for fixed-size blocks of
samples, never from the worker layout, so results are bit-identical for
any worker count and extending a sample budget leaves earlier draws
unchanged.  Each block yields sign vectors plus unit-variance noise;
callers scale the noise by sigma, which makes runs with matched seeds
share their draws across different noise levels (common random numbers).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 4096

WORKERS_ENV = "SIGDESIGN_WORKERS"


def worker_count() -> int:
    """Worker count from the environment; 1 if unset or unparsable."""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(block)])


def draw_block(seed: int, block: int, n_users: int, m_chips: int):
    """One block of uniform sign inputs (BLOCK, n) and unit noise (BLOCK, m)."""
    rng = block_rng(seed, block)
    signs = 1.0 - 2.0 * rng.integers(0, 2, size=(BLOCK, n_users)).astype(float)
    noise = rng.standard_normal((BLOCK, m_chips))
    return signs, noise


def map_blocks(fn, n_blocks: int) -> list:
    """Apply fn(block_index) for all blocks, in index order.

    Blocks run on a thread pool when the worker count is above one; the
    returned list is always ordered by block index, so reductions over it
    are identical for any worker count.
    """
    workers = worker_count()
    if workers == 1 or n_blocks <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_blocks)))
