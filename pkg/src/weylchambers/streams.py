"""Deterministic RNG streams for sharded sampling loops.

Every sampling loop in the package draws from generators seeded by the
pair (seed, shard index), so a run is reproducible for a fixed seed and
shard count no matter how the shards are scheduled.  Shard tallies are
integer arrays merged by addition, which is order-independent.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

Worker = Callable[[np.random.Generator, int], np.ndarray]


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for one shard, derived from (seed, shard index)."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    return np.random.default_rng([seed, index])


def shard_sizes(total: int, shards: int) -> list[int]:
    if total < 0 or shards < 1:
        raise ValueError("need total >= 0 and shards >= 1")
    base, rem = divmod(total, shards)
    return [base + (1 if i < rem else 0) for i in range(shards)]


def run_sharded(
    total: int, seed: int, shards: int, threads: int, worker: Worker
) -> np.ndarray:
    """Split ``total`` samples over shards and sum the workers' tallies."""
    sizes = shard_sizes(total, shards)

    def one(i: int) -> np.ndarray:
        return worker(substream(seed, i), sizes[i])

    live = [i for i in range(shards) if sizes[i] > 0]
    if threads > 1 and len(live) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, live))
    else:
        parts = [one(i) for i in live]
    out = parts[0].copy()
    for p in parts[1:]:
        out += p
    return out
