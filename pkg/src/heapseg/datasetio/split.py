"""Seeded object-level train/val splitting."""

from __future__ import annotations

import math

import numpy as np

from heapseg.meshio.database import ModelDatabase


def split_objects(
    db: ModelDatabase, fraction: float = 0.8, seed: int = 0
) -> tuple[list[str], list[str]]:
    """Shuffle model ids and cut at ceil(fraction * N).

    Returns (train, val), each sorted, disjoint and exhaustive. The epsilon
    keeps e.g. 0.8 * 1600 from ceiling to 1281 through float error.
    """
    if not (0.0 < fraction < 1.0):
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    n = len(db)
    if n < 2:
        raise ValueError(f"need at least 2 models to split, have {n}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed)])))
    perm = rng.permutation(n)
    k = math.ceil(fraction * n - 1e-9)
    ids = db.ids
    train = sorted(ids[i] for i in perm[:k])
    val = sorted(ids[i] for i in perm[k:])
    return train, val
