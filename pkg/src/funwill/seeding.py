"""Deterministic seed derivation for reproducible parallel experiments.

Every stochastic routine takes an explicit 64-bit seed; replication r of a
run derives its own stream seed from (seed, r, ...) via numpy's
SeedSequence hashing, so replications are statistically independent, can
execute in any order or concurrently, and always replay byte-identically.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def derive_seed(seed: int, *path: int) -> int:
    """Collapse (seed, *path) into a fresh 64-bit stream seed."""
    entropy = [validate_seed(seed), *(int(p) for p in path)]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """A fresh PCG64 generator for the given seed."""
    return np.random.default_rng(validate_seed(seed))
