"""Exact complex rationals used for matrix entries and polynomial coefficients.

Graph specifications carry their weights as decimal strings; keeping them as
pairs of :class:`fractions.Fraction` means the assembled matrices and the
pencil coefficients are exact, and rounding only happens when a value is
handed to a floating-point routine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Any, Union

import mpmath

RealLike = Union[int, str, Fraction, float]


def _to_fraction(x: RealLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # floats are taken at their shortest repr, not their binary value
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    # gmpy2.mpq, sympy Rational and friends
    num, den = getattr(x, "numerator", None), getattr(x, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def _fraction_str(q: Fraction) -> str:
    """Decimal string when the expansion terminates, ``p/q`` otherwise."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10**digits
    sign = "-" if scaled < 0 else ""
    mag = str(abs(scaled.numerator))
    mag = mag.rjust(digits + 1, "0")
    return f"{sign}{mag[:-digits]}.{mag[-digits:]}"


@dataclass(frozen=True)
class ExactComplex:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def coerce(cls, value: Any) -> "ExactComplex":
        """Build from an ExactComplex, a real, a complex, or an ``[re, im]`` pair."""
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"complex pair must have two entries, got {value!r}")
            return cls(_to_fraction(value[0]), _to_fraction(value[1]))
        if isinstance(value, complex):
            return cls(_to_fraction(value.real), _to_fraction(value.imag))
        if hasattr(value, "x") and hasattr(value, "y"):  # sympy GaussianRational
            return cls(_to_fraction(value.x), _to_fraction(value.y))
        return cls(_to_fraction(value), Fraction(0))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = ExactComplex.coerce(other)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = ExactComplex.coerce(other)
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        o = ExactComplex.coerce(other)
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ExactComplex.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("exact complex division by zero")
        return ExactComplex(
            (self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den
        )

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are exact")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Number):
            return ExactComplex.coerce(other) == self
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    # conversions ----------------------------------------------------------
    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __complex__(self):
        return self.to_complex()

    def to_mpc(self) -> mpmath.mpc:
        """Correctly rounded at the current mpmath working precision."""
        re = mpmath.mpf(self.re.numerator) / self.re.denominator
        im = mpmath.mpf(self.im.numerator) / self.im.denominator
        return mpmath.mpc(re, im)

    def to_pair(self) -> list[str]:
        return [_fraction_str(self.re), _fraction_str(self.im)]

    def __repr__(self):
        re, im = self.to_pair()
        return f"ExactComplex({re}, {im})"

    def __str__(self):
        re, im = self.to_pair()
        if self.im == 0:
            return re
        sign = "-" if self.im < 0 else "+"
        return f"{re}{sign}{_fraction_str(abs(self.im))}i"


ZERO = ExactComplex(0, 0)
ONE = ExactComplex(1, 0)


def exact(value: Any) -> ExactComplex:
    return ExactComplex.coerce(value)
