"""Univariate polynomials with exact coefficients in a fixed field.

Coefficients are stored ascending (constant term first) with no trailing
zeros, so equal polynomials have equal tuples.  The zero polynomial has an
empty coefficient tuple and degree minus infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from math import isqrt, lcm

from .fields import FieldDesc, FieldMismatchError, RawValue

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Poly:
    field: FieldDesc
    coeffs: tuple[RawValue, ...]  # ascending, no trailing zeros

    @classmethod
    def from_coeffs(cls, field: FieldDesc, coeffs) -> "Poly":
        vals = [field.normalize(c) for c in coeffs]
        while vals and vals[-1] == field.zero:
            vals.pop()
        return cls(field, tuple(vals))

    @classmethod
    def zero(cls, field: FieldDesc) -> "Poly":
        return cls(field, ())

    @classmethod
    def constant(cls, field: FieldDesc, c) -> "Poly":
        return cls.from_coeffs(field, [c])

    @classmethod
    def t(cls, field: FieldDesc) -> "Poly":
        """The identity polynomial t."""
        return cls(field, (field.zero, field.one))

    # -- structure -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> RawValue:
        if self.is_zero:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> RawValue:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"cannot mix {self.field} and {other.field}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly.from_coeffs(f, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(f, tuple(f.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        if self.is_zero or other.is_zero:
            return Poly.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == f.zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly.from_coeffs(f, out)

    def scale(self, c) -> "Poly":
        f = self.field
        c = f.normalize(c)
        return Poly.from_coeffs(f, [f.mul(c, a) for a in self.coeffs])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact polynomial long division (other must be nonzero)."""
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dlen = len(other.coeffs)
        if len(rem) < dlen:
            return Poly.zero(f), self
        inv_lead = f.inv(other.coeffs[-1])
        quot = [f.zero] * (len(rem) - dlen + 1)
        for k in range(len(rem) - dlen, -1, -1):
            c = rem[k + dlen - 1]
            if c == f.zero:
                continue
            q = f.mul(c, inv_lead)
            quot[k] = q
            for j, b in enumerate(other.coeffs):
                rem[k + j] = f.sub(rem[k + j], f.mul(q, b))
        return Poly.from_coeffs(f, quot), Poly.from_coeffs(f, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        f = self.field
        inv = f.inv(self.coeffs[-1])
        return Poly(f, tuple(f.mul(inv, c) for c in self.coeffs[:-1]) + (f.one,))

    def __call__(self, x) -> RawValue:
        """Evaluate by Horner's rule; returns a raw field value."""
        f = self.field
        x = f.normalize(x)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    # -- rendering --------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        f = self.field
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == f.zero:
                continue
            mag, neg = c, False
            if f.kind == "rat" and c < 0:
                mag, neg = -c, True
            if k == 0:
                body = f.format(mag)
            else:
                tpow = "t" if k == 1 else f"t^{k}"
                body = tpow if mag == f.one else f"{f.format(mag)}*{tpow}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if a.field != b.field:
        raise FieldMismatchError(f"cannot mix {a.field} and {b.field}")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def _divisors(n: int) -> list[int]:
    """Positive divisors of n >= 1, ascending."""
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(poly: Poly) -> list[Fraction]:
    """All rational roots of a nonzero polynomial over the rationals.

    Roots are sorted by (|num| + |den|, then positive before negative,
    then |num|), so 1 comes before -1 and 1/2 before 2.
    """
    if poly.field.kind != "rat":
        raise ValueError("rational root search requires the rational field")
    if poly.is_zero:
        raise ValueError("the zero polynomial has every rational root")
    coeffs = list(poly.coeffs)
    # Strip the t^k factor: 0 is a root iff the constant term vanishes.
    shift = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots: list[Fraction] = [Fraction(0)] if shift else []
    if len(coeffs) > 1:
        # Primitive integer form for the rational root theorem.
        mult = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * mult) for c in coeffs]
        content = 0
        for v in ints:
            content = int_gcd(content, v)
        ints = [v // content for v in ints]
        for num in _divisors(abs(ints[0])):
            for den in _divisors(abs(ints[-1])):
                if int_gcd(num, den) != 1:
                    continue
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if poly(cand) == 0:
                        roots.append(cand)
    roots.sort(key=lambda r: (abs(r.numerator) + r.denominator, r < 0, abs(r.numerator)))
    return roots
