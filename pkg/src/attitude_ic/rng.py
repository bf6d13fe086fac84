"""SplitMix64 random streams.

Every stochastic routine in the package consumes an explicit
:class:`RandomStream`.  The compiled kernels and the pure-Python kernels
implement the same generator bit for bit, so a given master seed produces
identical results on either backend.

Algorithm (Steele, Lea & Flood 2014)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Uniform doubles take the top 53 bits.  Bounded integers use rejection
below ``2**64 mod m`` so every residue is exactly equally likely.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *keys: int) -> int:
    """Hash ``base`` and integer ``keys`` into an independent 64-bit seed."""
    h = mix64(base ^ 0x5851F42D4C957F2D)
    for key in keys:
        h = mix64(h ^ mix64((int(key) + GOLDEN) & MASK64))
    return h


class RandomStream:
    """A seeded SplitMix64 stream.

    Parameters
    ----------
    seed : int
        Any non-negative integer; reduced modulo 2**64.
    """

    __slots__ = ("seed", "state")

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & MASK64
        self.state = self.seed

    def __repr__(self):
        return f"RandomStream(seed={self.seed:#x}, state={self.state:#x})"

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * INV53

    def coin(self, p: float) -> bool:
        return self.random() < p

    def bounded(self, m: int) -> int:
        if m <= 0:
            raise ValueError("bounded() needs m >= 1")
        thresh = (1 << 64) % m
        while True:
            x = self.next_u64()
            if x >= thresh:
                return x % m

    def spawn(self, *keys: int) -> "RandomStream":
        """Child stream keyed by ``keys``; does not advance this stream."""
        return RandomStream(derive_seed(self.seed, *keys))

    def fork(self) -> int:
        """Draw a 64-bit base seed for a batch of kernel work."""
        return derive_seed(self.next_u64())
