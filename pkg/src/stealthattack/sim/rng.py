"""Per-run random streams.

Run ``i`` of a simulation seeded with ``seed`` draws from a Philox4x64
generator keyed by the 128-bit word (seed, i).  Streams are therefore
independent of run order, thread count and block layout.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

RNG_FAMILY = "numpy Philox4x64-10, key=(seed, run index), counter from 0"

_U64 = 1 << 64


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def run_generator(seed: int, run: int) -> Generator:
    if not 0 <= run < _U64:
        raise ValueError(f"run index out of range: {run}")
    return Generator(Philox(key=check_seed(seed) | (int(run) << 64)))


def standard_normal_block(seed: int, first_run: int, n_runs: int, width: int) -> np.ndarray:
    """Rows of ``width`` standard normals, one row per run."""
    out = np.empty((n_runs, width))
    for j in range(n_runs):
        run_generator(seed, first_run + j).standard_normal(out=out[j])
    return out
