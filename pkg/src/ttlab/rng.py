"""Deterministic, platform-independent random streams.

Streams are derived from a 64-bit seed plus a counter by hashing; the
same (seed, index) pair yields the same draw on every platform and
Python build, which is what makes probe reports reproducible.  Samples
get independent substreams, so they could in principle be evaluated in
any order or in parallel.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction


class CounterRandom:
    """sha256 counter generator with named substreams."""

    def __init__(self, seed: int, stream: str = ""):
        self.seed = int(seed)
        self.stream = stream
        self._counter = 0

    def substream(self, name) -> "CounterRandom":
        return CounterRandom(self.seed, f"{self.stream}/{name}")

    def _block(self) -> bytes:
        msg = f"{self.seed}|{self.stream}|{self._counter}".encode()
        self._counter += 1
        return hashlib.sha256(msg).digest()

    def bits64(self) -> int:
        return int.from_bytes(self._block()[:8], "big")

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.bits64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], rejection-sampled (no modulo bias)."""
        span = hi - lo + 1
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            x = self.bits64()
            if x < limit:
                return lo + x % span

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, seq) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]

    def fraction(self, max_num: int = 12, max_den: int = 4) -> Fraction:
        """Positive rational with small numerator and denominator."""
        return Fraction(self.randint(1, max_num), self.randint(1, max_den))
