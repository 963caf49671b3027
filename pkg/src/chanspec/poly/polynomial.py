"""Univariate complex polynomials, coefficients stored lowest degree first.

A polynomial is *exact* when every coefficient is an :class:`ExactComplex`;
otherwise coefficients are ``mpc`` values tagged with the precision they were
rounded at. Exact polynomials combine with anything; two rounded ones must
share a precision.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .. import kernels
from ..errors import PrecisionMismatch
from ..numbers import ONE, ZERO, ExactComplex
from .bigcomplex import big

NEG_INF_DEGREE = -math.inf


def _is_zero(c) -> bool:
    if isinstance(c, ExactComplex):
        return c.is_zero()
    return c == 0


class ComplexPoly:
    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable, prec: int | None = None):
        cs = list(coeffs)
        exact = all(isinstance(c, ExactComplex) for c in cs)
        if exact and prec is None:
            self.prec = None
        else:
            if prec is None:
                prec = mpmath.mp.prec
            with mpmath.workprec(prec):
                cs = [big(c) for c in cs]
            self.prec = prec
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # construction -----------------------------------------------------------
    @classmethod
    def exact(cls, coeffs: Iterable) -> "ComplexPoly":
        return cls([ExactComplex.coerce(c) for c in coeffs])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "ComplexPoly":
        p = cls.exact([1])
        for r in roots:
            p = p * cls.exact([-ExactComplex.coerce(r), 1])
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "ComplexPoly":
        return cls.exact([0] * k + [c])

    # basic properties -------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF_DEGREE

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def __repr__(self):
        tag = "exact" if self.is_exact else f"{self.prec} bits"
        return f"ComplexPoly({[str(c) for c in self.coeffs]}, {tag})"

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.prec == other.prec

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    # precision handling -----------------------------------------------------
    def _common(self, other: "ComplexPoly"):
        if self.is_exact and other.is_exact:
            return None
        if self.is_exact:
            return other.prec
        if other.is_exact or other.prec == self.prec:
            return self.prec
        raise PrecisionMismatch(f"operands at {self.prec} and {other.prec} bits")

    def _lift(self, prec):
        if prec is None:
            return list(self.coeffs)
        with mpmath.workprec(prec):
            return [big(c) for c in self.coeffs]

    def to_mp(self, bits: int | None = None) -> "ComplexPoly":
        bits = bits or mpmath.mp.prec
        return ComplexPoly(self._lift(bits), prec=bits)

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        if isinstance(other, mpmath.mpc) or isinstance(other, mpmath.mpf):
            return ComplexPoly([other])
        return ComplexPoly.exact([other])

    def __add__(self, other):
        other = self._coerce(other)
        prec = self._common(other)
        a, b = self._lift(prec), other._lift(prec)
        zero = ZERO if prec is None else mpmath.mpc(0)
        size = max(len(a), len(b))
        a += [zero] * (size - len(a))
        b += [zero] * (size - len(b))
        with mpmath.workprec(prec or mpmath.mp.prec):
            return ComplexPoly([x + y for x, y in zip(a, b)], prec=prec)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly([-c for c in self.coeffs], prec=self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        prec = self._common(other)
        a, b = self._lift(prec), other._lift(prec)
        if not a or not b:
            return ComplexPoly([], prec=prec)
        zero = ZERO if prec is None else mpmath.mpc(0)
        out = [zero] * (len(a) + len(b) - 1)
        with mpmath.workprec(prec or mpmath.mp.prec):
            for i, x in enumerate(a):
                if _is_zero(x):
                    continue
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return ComplexPoly(out, prec=prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = ComplexPoly.exact([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "ComplexPoly":
        return self * self._coerce(c)

    def derivative(self) -> "ComplexPoly":
        with mpmath.workprec(self.prec or mpmath.mp.prec):
            return ComplexPoly([c * k for k, c in enumerate(self.coeffs) if k > 0], prec=self.prec)

    def compose_linear(self, a, b) -> "ComplexPoly":
        """p(a*z + b)."""
        lin = ComplexPoly._coerce(b) + ComplexPoly._coerce(a) * ComplexPoly.exact([0, 1])
        out = ComplexPoly([], prec=self.prec)
        for c in reversed(self.coeffs):
            out = out * lin + ComplexPoly([c], prec=self.prec)
        return out

    # evaluation -------------------------------------------------------------
    def __call__(self, z):
        if not self.coeffs:
            return ZERO if isinstance(z, ExactComplex) else 0 * z
        acc = self.coeffs[-1]
        if not isinstance(z, ExactComplex):
            acc = big(acc) if isinstance(z, mpmath.mpc) else complex(acc)
        for c in reversed(self.coeffs[:-1]):
            if isinstance(z, ExactComplex):
                acc = acc * z + c
            elif isinstance(z, mpmath.mpc):
                acc = acc * z + big(c)
            else:
                acc = acc * z + complex(c)
        return acc

    def abs_poly_value(self, r) -> mpmath.mpf:
        """sum_k |c_k| r^k, the magnitude bound at |z| = r."""
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * r + abs(big(c))
        return acc

    # evaluator protocol used by the root finder ------------------------------
    def eval_double(self, z):
        coef = self.to_numpy()[None, :] if self.coeffs else np.zeros((1, 1), np.complex128)
        empty = np.zeros(0, np.complex128)
        return kernels.product_power_sum(z, coef, np.zeros((1, 0)), empty, empty)

    def eval_mp(self, z):
        f = mpmath.mpc(0)
        df = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            df = df * z + f
            f = f * z + big(c)
        return f, df, self.abs_poly_value(abs(z))


X = ComplexPoly.exact([0, 1])
ONE_POLY = ComplexPoly.exact([ONE])
