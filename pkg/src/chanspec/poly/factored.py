"""Sums of polynomial-weighted factored powers.

    F(z) = sum_r a_r(z) * prod_j ((z - alpha_j) / beta_j) ** E[r, j]

evaluated without ever expanding the powers. This is the evaluator the root
finder uses for channel-lengthened spectra, where the exponents are n * e_j
and expanded coefficients would be hopelessly ill-conditioned.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .. import kernels
from ..errors import NumericError
from ..numbers import ZERO, ExactComplex
from .bigcomplex import big
from .polynomial import ComplexPoly


@dataclass
class ProductPowerSum:
    coefs: list  # ComplexPoly per member
    expo: np.ndarray  # (m, q) non-negative integers
    roots: list  # alpha_j, exact or complex
    scales: list  # beta_j, nonzero
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.expo = np.asarray(self.expo, dtype=np.int64).reshape(len(self.coefs), len(self.roots))
        if len(self.scales) != len(self.roots):
            raise ValueError("roots and scales must have the same length")
        if (self.expo < 0).any():
            raise ValueError("exponents must be non-negative")

    @property
    def members(self) -> int:
        return len(self.coefs)

    # degree bookkeeping ----------------------------------------------------
    def _top_members(self):
        tops = [a.degree + int(self.expo[r].sum()) for r, a in enumerate(self.coefs) if not a.is_zero()]
        if not tops:
            raise NumericError("all member coefficients vanish")
        top = max(tops)
        return top, [r for r, a in enumerate(self.coefs) if not a.is_zero() and a.degree + self.expo[r].sum() == top]

    def leading_coefficient(self):
        """Exact leading coefficient when every input is exact, else an mpc."""
        _, rs = self._top_members()
        total = ZERO
        exact = all(self.coefs[r].is_exact for r in rs) and all(isinstance(b, ExactComplex) for b in self.scales)
        if not exact:
            total = mpmath.mpc(0)
        for r in rs:
            term = self.coefs[r].leading()
            for j, e in enumerate(self.expo[r]):
                if e:
                    b = self.scales[j]
                    term = term / (b ** int(e)) if exact else big(term) / big(b) ** int(e)
            total = total + term
        return total

    @property
    def degree(self) -> int:
        if "degree" not in self._cache:
            top, _ = self._top_members()
            lead = self.leading_coefficient()
            if (lead.is_zero() if isinstance(lead, ExactComplex) else lead == 0):
                raise NumericError("leading terms cancel; the degree drops below the nominal count")
            self._cache["degree"] = int(top)
        return self._cache["degree"]

    # deflation -------------------------------------------------------------
    def deflate(self):
        """Strip factors common to every nonzero member.

        Returns ``(reduced, known)`` where ``known`` lists ``(alpha, multiplicity)``
        roots removed exactly.
        """
        live = [r for r, a in enumerate(self.coefs) if not a.is_zero()]
        expo = self.expo[live].copy()
        coefs = [self.coefs[r] for r in live]
        # factors sharing a root value contribute to the same (z - alpha) power
        groups: dict = {}
        for j, alpha in enumerate(self.roots):
            groups.setdefault(alpha, []).append(j)
        known = {}
        for alpha, js in groups.items():
            c = int(expo[:, js].sum(axis=1).min()) if live else 0
            if not c:
                continue
            known[alpha] = c
            for i in range(len(live)):
                left = c
                for j in js:
                    k = min(left, int(expo[i, j]))
                    if k:
                        expo[i, j] -= k
                        left -= k
                        # ((z - a)/b)^k = (z - a)^k b^-k; keep the b^-k in the coefficient
                        b = self.scales[j]
                        scale = ExactComplex.coerce(1) / b**k if isinstance(b, ExactComplex) else 1 / big(b) ** k
                        coefs[i] = coefs[i].scale(scale)
                    if not left:
                        break
        reduced = ProductPowerSum(coefs, expo, list(self.roots), list(self.scales))
        return reduced, sorted(known.items(), key=lambda kv: (complex(kv[0]).real, complex(kv[0]).imag))

    # evaluation ------------------------------------------------------------
    def _arrays(self):
        if "arrays" not in self._cache:
            width = max((len(a.coeffs) for a in self.coefs), default=1) or 1
            coef = np.zeros((self.members, width), np.complex128)
            for r, a in enumerate(self.coefs):
                v = a.to_numpy()
                coef[r, : v.size] = v
            self._cache["arrays"] = (
                coef,
                self.expo.astype(np.float64),
                np.array([complex(x) for x in self.roots], np.complex128),
                np.array([complex(x) for x in self.scales], np.complex128),
            )
        return self._cache["arrays"]

    def eval_double(self, z):
        coef, expo, roots, scales = self._arrays()
        return kernels.product_power_sum(z, coef, expo, roots, scales)

    def log_abs_members(self, z):
        _, expo, roots, scales = self._arrays()
        return kernels.log_abs_members(z, expo, roots, scales)

    def _mp_data(self):
        key = ("mp", mpmath.mp.prec)
        if key not in self._cache:
            self._cache[key] = (
                [[big(c) for c in a.coeffs] for a in self.coefs],
                [big(x) for x in self.roots],
                [big(x) for x in self.scales],
            )
        return self._cache[key]

    def eval_mp(self, z):
        """(F, F', magnitude) at the current mpmath precision."""
        coefs, roots, scales = self._mp_data()
        az = abs(z)
        diffs = [z - a for a in roots]
        q = [d / b for d, b in zip(diffs, scales)]
        F = mpmath.mpc(0)
        dF = mpmath.mpc(0)
        mag = mpmath.mpf(0)
        for r, cs in enumerate(coefs):
            a = mpmath.mpc(0)
            da = mpmath.mpc(0)
            am = mpmath.mpf(0)
            for c in reversed(cs):
                da = da * z + a
                a = a * z + c
                am = am * az + abs(c)
            g = mpmath.mpc(1)
            dlog = mpmath.mpc(0)
            for j, e in enumerate(self.expo[r]):
                if e:
                    g *= q[j] ** int(e)
                    if diffs[j] != 0:
                        dlog += int(e) / diffs[j]
            F += a * g
            # derivative of prod q_j^e_j is g * sum e_j / (z - alpha_j); handle z on a root
            dg = g * dlog
            for j, e in enumerate(self.expo[r]):
                if e and diffs[j] == 0 and e == 1:
                    rest = mpmath.mpc(1)
                    for k, ek in enumerate(self.expo[r]):
                        if k != j and ek:
                            rest *= q[k] ** int(ek)
                    dg += rest / scales[j]
            dF += da * g + a * dg
            mag += am * abs(g)
        return F, dF, mag

    def __call__(self, z):
        """Unscaled F(z) at the current mpmath precision."""
        return self.eval_mp(big(z))[0]


def single_member(poly: ComplexPoly) -> ProductPowerSum:
    return ProductPowerSum([poly], np.zeros((1, 0), np.int64), [], [])
