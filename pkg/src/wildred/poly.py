"""Dense univariate polynomials over a FieldSpec.

Just enough for pencil spectra: determinants of polynomial matrices by
fraction-free (Bareiss) elimination, root extraction by exhaustive
evaluation over GF(p) and by the rational-root theorem over Q, and
irreducible-factor hunting for NonSplitSpectrum reporting.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import WildredError
from .fields import FieldSpec
from .matrix import Mat


class Poly:
    """Coefficients low-to-high, normalized (no trailing zeros)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        coeffs = [field.coerce(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero(field):
        return Poly(field, [])

    @staticmethod
    def const(field, c):
        return Poly(field, [c])

    @staticmethod
    def x(field):
        return Poly(field, [field.zero, field.one])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [f.zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [f.zero] * (n - len(other.coeffs))
        return Poly(f, [f.add(x, y) for x, y in zip(a, b)])

    def __sub__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [f.zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [f.zero] * (n - len(other.coeffs))
        return Poly(f, [f.sub(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def divmod(self, other):
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [f.zero] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead_inv = f.inv(other.leading())
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = f.mul(c, lead_inv)
            quo[i - d] = q
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] = f.sub(rem[i - d + j], f.mul(q, b))
        return Poly(f, quo), Poly(f, rem)

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise WildredError("inexact polynomial division")
        return q

    def monic(self):
        if self.is_zero():
            return self
        inv = self.field.inv(self.leading())
        return Poly(self.field, [self.field.mul(inv, c) for c in self.coeffs])

    def eval(self, x):
        f = self.field
        x = f.coerce(x)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def shift_linear(self, lam):
        """The polynomial (x - lam)."""
        return Poly(self.field, [self.field.neg(self.field.coerce(lam)), self.field.one])

    def __repr__(self):
        if self.is_zero():
            return "0"
        fmt = self.field.format
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(fmt(c))
            elif i == 1:
                terms.append(f"{fmt(c)}*x")
            else:
                terms.append(f"{fmt(c)}*x^{i}")
        return " + ".join(terms)


def det_poly_matrix(entries) -> Poly:
    """Determinant of a square matrix of Poly entries (Bareiss, exact)."""
    n = len(entries)
    if n == 0:
        f = None
        raise WildredError("empty polynomial matrix needs a field")
    f = entries[0][0].field
    a = [row[:] for row in entries]
    sign = 1
    prev = Poly.const(f, f.one)
    for k in range(n - 1):
        # pivot: first row with nonzero (k,k) entry
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            return Poly.zero(f)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    if sign < 0:
        det = -det
    return det


def pencil_charpoly(A: Mat, B: Mat) -> Poly:
    """det(x*A - B) for square A, B of equal size."""
    f = A.field
    n = A.rows
    if n == 0:
        return Poly.const(f, f.one)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(Poly(f, [f.neg(B[i, j]), A[i, j]]))
        entries.append(row)
    return det_poly_matrix(entries)


def charpoly(M: Mat) -> Poly:
    """det(x*I - M)."""
    return pencil_charpoly(Mat.identity(M.field, M.rows), M)


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def roots_with_multiplicity(poly: Poly):
    """All roots in the base field with multiplicities, plus the root-free
    remainder (monic).  Deterministic: roots reported in field sort order.

    Over GF(p) candidates are all field elements; over Q the rational
    root theorem on the integer-normalized polynomial.
    """
    f = poly.field
    if poly.is_zero():
        raise WildredError("zero polynomial has no root structure")
    rem = poly.monic()
    if f.is_finite:
        candidates = list(f.elements_raw())
    else:
        # clear denominators, then p/q with p | a0, q | a_lead
        from math import lcm
        den = lcm(*[c.denominator for c in rem.coeffs]) if rem.coeffs else 1
        ints = [int(c * den) for c in rem.coeffs]
        low = next((c for c in ints if c != 0), 0)
        candidates = [Fraction(0)]
        if low != 0 and ints:
            for pnum in _divisors(low):
                for qden in _divisors(ints[-1]):
                    candidates.append(Fraction(pnum, qden))
                    candidates.append(Fraction(-pnum, qden))
        candidates = sorted(set(candidates), key=f.sort_key)
    roots = []
    for cand in candidates:
        if rem.degree <= 0:
            break
        mult = 0
        while rem.degree > 0 and not rem.eval(cand):
            rem = rem.exact_div(Poly(f, [f.neg(f.coerce(cand)), f.one]))
            mult += 1
        if mult:
            roots.append((f.coerce(cand), mult))
    roots.sort(key=lambda rm: f.sort_key(rm[0]))
    return roots, rem.monic()


def irreducible_factor(poly: Poly) -> Poly:
    """Some non-linear factor of a root-free polynomial, irreducible when
    the field is finite (found by trial division over all monic divisors
    of at most half degree).  Over Q the monic input is returned as-is.
    """
    f = poly.field
    rem = poly.monic()
    if not f.is_finite or rem.degree < 2:
        return rem
    while True:
        found = None
        for d in range(2, rem.degree // 2 + 1):
            for cand in _all_monic(f, d):
                _, r = rem.divmod(cand)
                if r.is_zero():
                    found = cand
                    break
            if found:
                break
        if found is None:
            return rem
        rem = found


def _all_monic(field: FieldSpec, degree: int):
    """All monic polynomials of exact degree over a finite field, lex order."""
    p = field.p
    total = p ** degree
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % p)
            c //= p
        coeffs.append(field.one)
        yield Poly(field, coeffs)
