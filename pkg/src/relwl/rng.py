"""Seeded weight generator used by every randomized forward pass and suite.

The generator is xorshift64* (Vigna 2016): a 64-bit xorshift step followed by
a multiplication with 0x2545F4914F6CDD1D.  The seed is first mixed through
one splitmix64 round so that small consecutive seeds (0, 1, 2, ...) land on
unrelated states and the all-zero state is impossible.  Floating-point draws
take the top 53 bits and are mapped affinely onto [-1, 1).  This exact
sequence is part of the reproducibility contract: identical seeds give
bit-identical weights on every platform.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_STAR = 0x2545F4914F6CDD1D
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x = (x + _SPLITMIX_GAMMA) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class XorShift64Star:
    """Deterministic 64-bit stream; one instance per (seed, purpose)."""

    def __init__(self, seed: int):
        state = _splitmix64(seed & _MASK)
        if state == 0:
            state = _SPLITMIX_GAMMA
        self._state = state

    def next_u64(self) -> int:
        s = self._state
        s ^= (s >> 12)
        s ^= (s << 25) & _MASK
        s ^= (s >> 27)
        self._state = s
        return (s * _STAR) & _MASK

    def uniform(self) -> float:
        """One draw, uniform in [-1, 1)."""
        return (self.next_u64() >> 11) * (2.0 ** -52) - 1.0

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        data = [self.uniform() for _ in range(rows * cols)]
        return np.array(data, dtype=np.float64).reshape(rows, cols)

    def vector(self, size: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(size)], dtype=np.float64)

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        span = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < span:
                return u % bound
