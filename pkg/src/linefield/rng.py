"""Counter-based Philox4x32-10 streams.

Every uniform variate is a pure function of ``(seed, stream_index, block)``,
so a batch of samples can be generated for any index range without touching
the draws of any other range. Results never depend on how work is split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_ROUNDS = 10
_TWO_M53 = 2.0**-53


def philox4x32(counter: tuple, key: tuple[int, int]) -> tuple[np.ndarray, ...]:
    """Raw Philox4x32-10 bijection, vectorized over the counter words.

    Args:
        counter: four arrays (or ints) of 32-bit counter words.
        key: two 32-bit key words.

    Returns:
        Four uint64 arrays holding the 32-bit output words.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & _MASK32 for c in counter)
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    for r in range(_ROUNDS):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ np.uint64(k0),
            p1 & _MASK32,
            (p0 >> np.uint64(32)) ^ c3 ^ np.uint64(k1),
            p0 & _MASK32,
        )
    return c0, c1, c2, c3


def uniform_pair(seed: int, streams: np.ndarray, block: int) -> tuple[np.ndarray, np.ndarray]:
    """Two independent U[0,1) variates per stream from one Philox block.

    Each output uses 53 bits of a 64-bit word, so values are exact
    multiples of 2**-53.
    """
    streams = np.asarray(streams, dtype=np.uint64)
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    lo = streams & _MASK32
    hi = streams >> np.uint64(32)
    b = int(block) & 0xFFFFFFFFFFFFFFFF
    w0, w1, w2, w3 = philox4x32(
        (lo, hi, np.uint64(b & 0xFFFFFFFF), np.uint64(b >> 32)),
        (seed & 0xFFFFFFFF, seed >> 32),
    )
    x = w0 | (w1 << np.uint64(32))
    y = w2 | (w3 << np.uint64(32))
    u = (x >> np.uint64(11)).astype(np.float64) * _TWO_M53
    v = (y >> np.uint64(11)).astype(np.float64) * _TWO_M53
    return u, v


@dataclass(frozen=True)
class RngStream:
    """One reproducible substream, identified by ``(seed, stream_index)``."""

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_index"):
            value = getattr(self, name)
            if not 0 <= value < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def block(self, block: int) -> tuple[float, float]:
        u, v = uniform_pair(self.seed, np.array([self.stream_index], dtype=np.uint64), block)
        return float(u[0]), float(v[0])

    def uniforms(self, count: int) -> np.ndarray:
        """First ``count`` variates of the stream, two per block."""
        out = np.empty(count + (count & 1))
        for b in range(len(out) // 2):
            out[2 * b], out[2 * b + 1] = self.block(b)
        return out[:count]

    def spawn(self, offset: int) -> "RngStream":
        return RngStream(self.seed, (self.stream_index + offset) % 2**64)


def stream_range(start: int, count: int) -> np.ndarray:
    return np.arange(start, start + count, dtype=np.uint64)
