"""SplitMix64 generator used for every seeded search in the package.

The stream is fixed so results are reproducible across platforms and
implementations:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    output <- z ^ (z >> 31)

A coin flip is the top bit of one output.  A float in [0, 1) is
``(output >> 11) * 2**-53``.  Restart ``k`` of a seeded search uses the
generator constructed from ``seed + k``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def coin(self) -> bool:
        return bool(self.next_u64() >> 63)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def derive(self) -> int:
        """A fresh 64-bit seed for a sub-computation."""
        return self.next_u64()


def splitmix_block(seeds: np.ndarray, count: int) -> np.ndarray:
    """Outputs ``count`` successive draws for each seed, vectorized.

    Row ``r`` equals ``[SplitMix64(seeds[r]).next_u64() for _ in range(count)]``.
    """
    state = np.asarray(seeds, dtype=np.uint64).copy()
    out = np.empty((state.shape[0], count), dtype=np.uint64)
    g, m1, m2 = np.uint64(GAMMA), np.uint64(MIX1), np.uint64(MIX2)
    s30, s27, s31 = np.uint64(30), np.uint64(27), np.uint64(31)
    with np.errstate(over="ignore"):
        for k in range(count):
            state += g
            z = state.copy()
            z = (z ^ (z >> s30)) * m1
            z = (z ^ (z >> s27)) * m2
            out[:, k] = z ^ (z >> s31)
    return out


def numpy_generator(seed: int) -> np.random.Generator:
    """Bulk Monte Carlo stream keyed by a SplitMix64-derived seed."""
    return np.random.Generator(np.random.PCG64(SplitMix64(seed).next_u64()))
