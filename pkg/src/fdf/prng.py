"""Deterministic pseudo-random numbers for reproducible fits and data generation.

A splitmix64-seeded xoshiro256** generator is used instead of platform RNGs so
that artifacts are byte-stable across Python and numpy versions. The exact
algorithm and draw order are documented in docs/function-artifacts.md; changing
either is a format-breaking change.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class Rng:
    """xoshiro256** with state seeded by four splitmix64 outputs."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state, out = splitmix64(state)
            s.append(out)
        self._s = s

    def next_uint64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def uniform_signed(self) -> float:
        """Uniform double in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def matrix(self, rows: int, cols: int, low: float = -1.0, high: float = 1.0) -> np.ndarray:
        """Row-major (rows, cols) array of uniforms in [low, high)."""
        span = high - low
        flat = [low + span * self.uniform() for _ in range(rows * cols)]
        return np.array(flat, dtype=np.float64).reshape(rows, cols)

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates permutation of range(n)."""
        idx = list(range(n))
        for i in range(n - 1, 0, -1):
            j = int(self.uniform() * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx


def derive_seed(seed: int, label: str) -> int:
    """Stable per-label child seed, e.g. one per pipeline box from the run seed."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    mixed = (seed & _MASK64) ^ int.from_bytes(digest[:8], "big")
    _, out = splitmix64(mixed)
    return out
