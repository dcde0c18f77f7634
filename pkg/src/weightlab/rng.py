"""Counter-based SplitMix64 stream.

The generator is fully specified so that any implementation can reproduce
the same weights bit for bit.  Output ``i`` (0-based) of the stream seeded
with ``seed`` is::

    z  = (seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z  = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    z ^= z >> 31

and the matching uniform double in ``[0, 1)`` is ``(z >> 11) * 2**-53``.
This is the sequential SplitMix64 recurrence written in closed form, so a
block of draws is a single vectorised evaluation.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Raw 64-bit outputs ``offset .. offset+count-1`` of the stream."""
    base = np.uint64(seed & _MASK)
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix(base + idx * np.uint64(GOLDEN_GAMMA))


def uniforms(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Uniform doubles in [0, 1) from the stream."""
    z = splitmix64(seed, count, offset)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed: output ``index`` of the parent stream."""
    return int(splitmix64(seed, 1, index)[0])
