"""Seeded randomness with a single named algorithm.

Every stochastic operation in the package draws from a numpy PCG64 generator
seeded with a 64-bit integer.  Independent streams (one per trial, per sample
size, ...) are derived from a master seed with a splitmix64 finalizer, so a
report that records ``(rng_algorithm, master_seed)`` can be replayed exactly.
"""

from __future__ import annotations

import numpy as np

# Recorded in every report so a run can name the stream it used.
RNG_ALGORITHM = "pcg64(numpy)+splitmix64-derivation"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalization step (Steele, Lea, Flood 2014)."""
    x &= _MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic per-trial seed: splitmix64 of master + (index+1)*golden."""
    if index < 0:
        raise ValueError("derivation index must be nonnegative")
    return splitmix64((master_seed + (index + 1) * _GOLDEN) & _MASK64)


def make_generator(seed: int) -> np.random.Generator:
    """The package-wide generator for a given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))
