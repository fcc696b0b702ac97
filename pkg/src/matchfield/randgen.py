"""Deterministic splitmix64 stream for seeded random fixtures.

Weight matrices for coherent fields are drawn from this stream as 48-bit
integers; with a fixed seed the output is identical across platforms.  A tie
in the resulting minimal matchings (astronomically unlikely but possible)
makes the generator step to the next derived seed, so every seed yields a
valid generic matrix deterministically.
"""

from __future__ import annotations

from fractions import Fraction

from . import fields
from .errors import TiedMinimumError

_MASK = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite stream of 64-bit integers."""
    state = seed & _MASK

    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def random_weight_matrix(n: int, d: int, seed: int) -> list[list[Fraction]]:
    """n x d matrix of 48-bit rational weights from the seeded stream."""
    stream = splitmix64(seed)
    return [[Fraction(next(stream) >> 16) for _ in range(d)] for _ in range(n)]


def seeded_coherent_field(n: int, d: int, seed: int):
    """Coherent field of a seeded random matrix; deterministically re-seeds
    on the (rare) tie.  Returns (field, weights, seed actually used)."""
    attempt = seed
    for _ in range(64):
        weights = random_weight_matrix(n, d, attempt)
        try:
            return fields.coherent_field(weights), weights, attempt
        except TiedMinimumError:
            attempt = (attempt * 6364136223846793005 + 1442695040888963407) & _MASK
    raise TiedMinimumError((), None, None)
