"""Counter-based uniform random source.

Every variate is a pure function of ``(seed, index)``: there is no mutable
generator state to advance, so the value at stream position ``j`` does not
depend on which other positions have been generated, in what order, or by
which worker.  Splitting an index range across processes and concatenating
the pieces reproduces the single-process output bit for bit.

The word at position ``j`` is ``mix64(key + (j + 1) * GOLDEN)`` where
``mix64`` is the SplitMix64 finalizer (Steele, Lea & Flood) and ``key`` is a
mixed image of the user seed.  Uniform doubles take the top 53 bits, giving
values on ``[0, 1)``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["CounterStream", "derive_seed"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
# second increment for domain separation between parent and child streams
_LEAF = 0xD1B54A32D192ED03

_G = np.uint64(_GOLDEN)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_DOUBLE_SCALE = 1.0 / (1 << 53)


def _mix_int(z: int) -> int:
    """SplitMix64 finalizer on a plain Python int (mod 2**64)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    # uint64 multiplication wraps mod 2**64, which is exactly what we want
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def derive_seed(seed: int, tag: int) -> int:
    """Deterministic sub-seed for an independent purpose-specific stream."""
    if seed < 0 or tag < 0:
        raise ValueError("seed and tag must be nonnegative")
    return _mix_int(_mix_int(seed ^ _GOLDEN) + (tag + 1) * _LEAF)


class CounterStream:
    """Indexable uniform stream: position j is a pure function of (seed, j)."""

    __slots__ = ("seed", "_key")

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)) or seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self.seed = int(seed)
        self._key = np.uint64(_mix_int(self.seed ^ _GOLDEN))

    def child(self, tag: int) -> "CounterStream":
        """Independent stream for sub-purpose ``tag``; deterministic in (seed, tag)."""
        return CounterStream(derive_seed(self.seed, tag))

    def words(self, indices: np.ndarray) -> np.ndarray:
        """Raw 64-bit outputs at the given stream positions."""
        idx = np.asarray(indices, dtype=np.uint64)
        return _mix_array((idx + _ONE) * _G + self._key)

    def uniforms_at(self, indices: np.ndarray) -> np.ndarray:
        """Uniform [0, 1) doubles at the given stream positions."""
        return (self.words(indices) >> _S11).astype(np.float64) * _DOUBLE_SCALE

    def uniforms(self, start: int, stop: int) -> np.ndarray:
        """Uniform [0, 1) doubles at positions start..stop-1."""
        if start < 0 or stop < start:
            raise ValueError("need 0 <= start <= stop")
        return self.uniforms_at(np.arange(start, stop, dtype=np.uint64))

    def signs(self, start: int, stop: int) -> np.ndarray:
        """Independent fair signs (+-1.0) at positions start..stop-1."""
        u = self.uniforms(start, stop)
        return np.where(u < 0.5, -1.0, 1.0)
