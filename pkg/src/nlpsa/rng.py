"""Counter-based Gaussian noise.

Every draw is a pure function of ``(seed, stream, i, j)``: the key is
folded through the SplitMix64 finalizer one word at a time, and two
independent uniforms feed a Box-Muller transform. No generator state
exists, so any partition of the work yields bitwise-identical output.
"""
from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1

# stream ids
NOISE = 0
PHASE = 1


def _mix(x):
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


def hash64(seed, *words):
    """SplitMix64-style hash of an integer seed and integer (array) words."""
    with np.errstate(over="ignore"):
        h = _mix(np.asarray([int(seed) & _MASK], dtype=np.uint64))
        for w in words:
            w = np.asarray(w).astype(np.int64).view(np.uint64)
            h = _mix(h ^ w)
    return h


def uniform(seed, *words):
    """Uniform floats in the open interval (0, 1), 53-bit resolution."""
    bits = hash64(seed, *words) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)


def normal(seed, stream, i, j):
    """Standard normal draws keyed by ``(seed, stream, i, j)``.

    `i` and `j` broadcast against each other, e.g. frame index and flat
    pixel index.
    """
    i, j = np.broadcast_arrays(np.asarray(i), np.asarray(j))
    u1 = uniform(seed, stream, 0, i, j)
    u2 = uniform(seed, stream, 1, i, j)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
