"""Seeded 64-bit generator with fully serializable state.

SplitMix64 (Steele, Lea & Flood 2014; the reference generator shipped with
Java's SplittableRandom and used to seed the xoshiro family).  The entire
generator state is a single 64-bit integer, which makes snapshots trivially
byte-stable and bit-exact replay possible from any point of a run.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Deterministic stream of 64-bit words; state is one integer."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    @classmethod
    def from_state(cls, state: int) -> "SplitMix64":
        rng = cls(0)
        rng.state = state & _MASK64
        return rng

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Modulo bias is negligible for the
        desk-scale ranges used here and keeps draw counts predictable."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates. Consumes exactly len(items) - 1 draws
        for len(items) >= 2, zero otherwise."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
