"""Pinned deterministic random stream (splitmix64).

Every seeded generator in this package draws from this stream, so a seed
fixes the output bit-for-bit across platforms and Python versions.  The
constants are the standard splitmix64 ones; random.Random is avoided on
purpose because its internals are not part of any stability contract.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to kill modulo bias."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def chance(self, probability: Fraction) -> bool:
        """True with the given exact probability; consumes one draw."""
        if not 0 <= probability <= 1:
            raise ValueError(f"probability {probability} outside [0, 1]")
        threshold = (probability.numerator << 64) // probability.denominator
        return self.next_u64() < threshold

    def choice(self, seq):
        return seq[self.below(len(seq))]
