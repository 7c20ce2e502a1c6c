"""Deterministic splitmix64 PRNG and seeded random object generators.

Every random choice in the library and its test suites flows through
SplitMix so reports are byte-reproducible across runs and platforms.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotInvertible
from .fields import FieldSpec
from .matrix import Mat, is_invertible

_MASK = (1 << 64) - 1


class SplitMix:
    """splitmix64; state advances by the golden-gamma constant."""

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        # rejection sampling keeps the distribution exact
        lim = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < lim:
                return v % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, lst: list) -> None:
        for i in range(len(lst) - 1, 0, -1):
            j = self.randrange(i + 1)
            lst[i], lst[j] = lst[j], lst[i]

    # -- field / matrix helpers ----------------------------------------

    def scalar(self, field: FieldSpec, bound: int = 5):
        if field.is_finite:
            return field.coerce(self.randrange(field.p))
        return field.coerce(Fraction(self.randint(-bound, bound)))

    def nonzero_scalar(self, field: FieldSpec, bound: int = 5):
        while True:
            v = self.scalar(field, bound)
            if v:
                return v

    def matrix(self, field: FieldSpec, rows: int, cols: int, bound: int = 5) -> Mat:
        return Mat(rows, cols, field,
                   [self.scalar(field, bound) for _ in range(rows * cols)])

    def invertible(self, field: FieldSpec, n: int, bound: int = 5, tries: int = 1000) -> Mat:
        if n == 0:
            return Mat.identity(field, 0)
        for _ in range(tries):
            m = self.matrix(field, n, n, bound)
            if is_invertible(m):
                return m
        raise NotInvertible(f"no invertible {n}x{n} sample in {tries} tries")
