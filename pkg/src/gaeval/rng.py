"""SplitMix64 index streams for the bootstrap.

Substream ``b`` of seed ``s`` starts from the key

    key(s, b) = mix(mix(s mod 2**64) XOR (b mod 2**64))

and its ``k``-th raw output (k = 0, 1, ...) is ``mix(key + (k + 1) * GAMMA)``
with all arithmetic mod 2**64, i.e. a plain SplitMix64 generator whose state
was set to ``key``.  A raw output ``x`` becomes an index below ``n`` by
rejection: ``x`` is discarded when ``x < 2**64 mod n``, otherwise the index is
``x mod n``.

Because each output depends only on (key, k), whole blocks of draws can be
computed at once with numpy; :class:`SplitMix64` is the scalar reference.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def substream_key(seed: int, b: int) -> int:
    return mix64(mix64(seed & MASK64) ^ (b & MASK64))


class SplitMix64:
    """Scalar SplitMix64 generator."""

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def substream(cls, seed: int, b: int) -> "SplitMix64":
        return cls(substream_key(seed, b))

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def raw_block(key: int, start: int, count: int) -> np.ndarray:
    """Raw outputs ``start .. start + count - 1`` of the stream with state ``key``."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key) + k * np.uint64(GAMMA)
        return _mix64_array(z)


class IndexStream:
    """Index draws below ``n`` from one substream, consumed in blocks."""

    def __init__(self, seed: int, b: int, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.key = substream_key(seed, b)
        self.n = n
        self.pos = 0
        self._threshold = np.uint64((1 << 64) % n)

    def take(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            need = count - filled
            raw = raw_block(self.key, self.pos, need)
            ok = raw >= self._threshold
            if ok.all():
                out[filled:] = (raw % np.uint64(self.n)).astype(np.int64)
                self.pos += need
                filled = count
            else:
                # consume only up to and including the first rejected draw
                first_bad = int(np.argmin(ok))
                out[filled:filled + first_bad] = (raw[:first_bad] % np.uint64(self.n)).astype(np.int64)
                filled += first_bad
                self.pos += first_bad + 1
        return out
