"""Keyed pseudorandom function built from the splitmix64 finaliser.

Randomised engines never keep generator state: each random word is a pure
function of ``(seed, words...)``.  The scalar and numpy versions agree
bit-for-bit, which lets batch materialisation reproduce single queries.
"""
from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z = (z + _GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def keyed(seed: int, *words: int) -> int:
    h = mix64(seed & MASK)
    for w in words:
        h = mix64(h ^ (w & MASK))
    return h


_U_GOLDEN = np.uint64(_GOLDEN)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z + _U_GOLDEN
        z = (z ^ (z >> _S30)) * _U_M1
        z = (z ^ (z >> _S27)) * _U_M2
    return z ^ (z >> _S31)


def keyed_array(seed: int, *words) -> np.ndarray:
    """Vectorised :func:`keyed`; each word may be an int or an integer array."""
    h = np.uint64(mix64(seed & MASK))
    for w in words:
        if isinstance(w, (int, np.integer)):
            w = np.uint64(int(w) & MASK)
        else:
            w = np.asarray(w).astype(np.uint64)
        h = mix64_array(h ^ w)
    return np.asarray(h, dtype=np.uint64)
