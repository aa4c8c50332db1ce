"""Deterministic, splittable randomness for every experiment in this package.

The generator is splitmix64, fixed repo-wide.  Two usage patterns:

* Counter streams (`stream_u64`, `stream_block`): the k-th raw output of a
  stream is a pure function of ``(seed, k)``.  This is what the estimator
  and tester hot paths use, so that a numba kernel, a vectorized numpy
  pass, and a plain Python loop all produce bit-identical draws, and so
  that trials can be sharded across workers in any order without changing
  the result.
* `SplitMix64`: a tiny sequential generator for code where a stateful
  shuffle or rejection loop is more natural (instance sampling, switch
  processes).

Child seeds come from `derive_seed(seed, *tags)`; operations that fan out
(for example one seed per Matching-Estimation call) document their tag
constants next to the call site.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective scramble of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *tags: int) -> int:
    """Fold integer tags into a seed, yielding an independent child stream."""
    s = seed & MASK64
    for t in tags:
        s = mix64((s + GOLDEN + (t & MASK64)) & MASK64)
    return s


def stream_u64(seed: int, k: int) -> int:
    """The k-th raw 64-bit output of the counter stream for `seed` (k >= 0)."""
    return mix64((seed + (k + 1) * GOLDEN) & MASK64)


def stream_block(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized `stream_u64(seed, start + j)` for j in range(count)."""
    ks = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed) + ks * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def points_block(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """Uniform points of {0,1}^n as int64 indices, one per stream counter."""
    return (stream_block(seed, start, count) & np.uint64((1 << n) - 1)).astype(np.int64)


def dims_block(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """Uniform dimensions 1..n, one per trial, by rejection on the raw stream.

    Trial k reserves counters ``64*k .. 64*k+63``; the first raw below the
    rejection bound is used.  The reject probability is (2^64 mod n)/2^64,
    so the fallback loop essentially never runs, but it keeps the draw
    exactly uniform and exactly reproducible.
    """
    bound = np.uint64((MASK64 + 1) - (MASK64 + 1) % n)
    ks = np.arange(count, dtype=np.uint64) * np.uint64(64) + np.uint64(start)
    z = np.uint64(seed) + (ks + np.uint64(1)) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    bad = np.nonzero(z >= bound)[0]
    for idx in bad:
        a = 1
        v = z[idx]
        while v >= bound:
            v = np.uint64(stream_u64(seed, int(start) + 64 * int(idx) + a))
            a += 1
        z[idx] = v
    return (z % np.uint64(n)).astype(np.int64) + 1


def subset_mask(seed: int, n: int, h: int) -> int:
    """Random S ⊆ [n] with each dimension included independently w.p. 2^-h.

    Returned as a bitmask with bit i-1 for dimension i.  Inclusion tests the
    top h bits of the per-dimension raw, which realizes the probability
    exactly (h = 0 includes everything).
    """
    if h == 0:
        return (1 << n) - 1
    mask = 0
    for i in range(n):
        if stream_u64(seed, i) >> (64 - h) == 0:
            mask |= 1 << i
    return mask


class SplitMix64:
    """Sequential splitmix64 generator for shuffle/rejection-style code."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def bounded(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        bound = (MASK64 + 1) - (MASK64 + 1) % n
        while True:
            v = self.next_u64()
            if v < bound:
                return v % n

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def shuffle(self, items: list) -> list:
        """In-place Fisher-Yates shuffle; returns the list."""
        for j in range(len(items) - 1, 0, -1):
            k = self.bounded(j + 1)
            items[j], items[k] = items[k], items[j]
        return items
