"""Exact scalar arithmetic over Q and GF(p), p prime.

A FieldSpec owns the arithmetic; raw values are Fraction (over Q) or
int residues in 0..p-1 (over GF(p)).  Scalar is a thin immutable
wrapper used at public boundaries; matrix internals work on raw values
for speed.  All arithmetic is exact -- no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import FieldMismatch, InfiniteField, WildredError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FieldSpec:
    """Q (p is None) or GF(p) with p prime.

    Instances are interned: GF(5) is GF(5) and equality is identity-safe.
    """

    _cache: dict = {}

    def __new__(cls, p=None):
        key = p
        inst = cls._cache.get(key)
        if inst is not None:
            return inst
        if p is not None and not _is_prime(p):
            raise WildredError(f"{p} is not prime")
        inst = super().__new__(cls)
        inst.p = p
        cls._cache[key] = inst
        return inst

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    # -- raw-value arithmetic ------------------------------------------

    def coerce(self, x):
        """Normalize x (int, Fraction, Scalar or raw) to a raw value."""
        if isinstance(x, Scalar):
            if x.field is not self:
                raise FieldMismatch(f"scalar over {x.field}, expected {self}")
            return x.value
        if self.p is None:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            raise WildredError(f"cannot coerce {x!r} into Q")
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise WildredError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        raise WildredError(f"cannot coerce {x!r} into GF({self.p})")

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- ordering, formatting, enumeration -----------------------------

    def sort_key(self, a):
        """Deterministic total order: residues on GF(p); (sign, magnitude)
        on Q.  Used for canonical block ordering."""
        if self.p is not None:
            return (a,)
        s = (a > 0) - (a < 0)
        return (s, abs(a))

    def format(self, a) -> str:
        if self.p is not None:
            return str(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, text: str):
        """Parse a scalar token (`n` or `n/d` over Q, residue over GF(p))."""
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                return self.coerce(Fraction(int(num), int(den)))
            return self.coerce(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise WildredError(f"bad scalar {text!r}: {exc}") from exc

    def elements_raw(self) -> Iterator:
        if self.p is None:
            raise InfiniteField("cannot enumerate Q")
        return iter(range(self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"

    def __str__(self):
        return self.__repr__()


def Rationals() -> FieldSpec:
    return FieldSpec(None)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


QQ = Rationals()


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field; canonical representation."""

    field: FieldSpec
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(self.field, other)
        elif other.field is not self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.format(self.value)


def field_elements(field: FieldSpec) -> Iterator[Scalar]:
    """Yield 0, 1, ..., p-1 of a prime field, each exactly once.

    Raises InfiniteField over Q.
    """
    if not field.is_finite:
        raise InfiniteField("field_elements needs a finite field")
    return (Scalar(field, v) for v in field.elements_raw())
