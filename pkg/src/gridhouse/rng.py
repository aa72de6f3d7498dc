"""Deterministic random streams.

A fixed 64-bit mixing generator (SplitMix64) so that identical seeds give
identical draw sequences on every platform and Python version. Named
sub-streams let independent stages (floor plan, furniture, objects) draw
without perturbing each other.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 stream with stable named-stream derivation."""

    __slots__ = ("seed", "state")

    def __init__(self, seed: int, state: int | None = None):
        self.seed = seed & _MASK64
        self.state = self.seed if state is None else state & _MASK64

    def derive(self, name: str) -> "Rng":
        """Child stream keyed off the parent seed, not its current position."""
        return Rng(_mix(self.seed ^ _fnv1a64(name)))

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        return _mix(self.state)

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n). n must be positive."""
        if n <= 0:
            raise ValueError(f"randrange needs n >= 1, got {n}")
        return (self.next_u64() * n) >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform int in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def random(self) -> float:
        return self.next_u64() / (1 << 64)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "state": self.state}

    @classmethod
    def from_dict(cls, d: dict) -> "Rng":
        return cls(d["seed"], d["state"])

    def __eq__(self, other):
        return isinstance(other, Rng) and (self.seed, self.state) == (other.seed, other.state)

    def __repr__(self):
        return f"Rng(seed={self.seed:#x}, state={self.state:#x})"
