"""Families F_n(z) = sum_r a_r(z) f_r(z)^n with factored f_r."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .. import kernels
from ..errors import SpecError
from ..numbers import ExactComplex
from ..pencil import SubsetFamily, subset_label
from ..poly.factored import ProductPowerSum
from ..poly.polynomial import ComplexPoly


@dataclass(frozen=True)
class Member:
    label: str
    a: ComplexPoly
    expo: tuple[int, ...]  # exponent of each family factor in f_r


@dataclass(frozen=True)
class AnalyticFamily:
    """Members share a list of factors (alpha_j, beta_j); f_r = prod ((z - alpha_j)/beta_j)^expo_rj."""

    members: tuple[Member, ...]
    factors: tuple[tuple[ExactComplex, ExactComplex], ...]
    name: str = ""

    def __post_init__(self):
        labels = [m.label for m in self.members]
        if len(set(labels)) != len(labels):
            raise SpecError("member labels must be unique")
        for m in self.members:
            if m.a.is_zero():
                raise SpecError(f"member {m.label} has a zero coefficient polynomial")
            if len(m.expo) != len(self.factors):
                raise SpecError(f"member {m.label} has {len(m.expo)} exponents for {len(self.factors)} factors")
        for alpha, beta in self.factors:
            if beta.is_zero():
                raise SpecError("factor scale beta must be nonzero")

    @classmethod
    def build(cls, factors: Sequence, members: Sequence, name: str = "") -> "AnalyticFamily":
        """``factors``: (alpha, beta) pairs; ``members``: (label, coefficient list, exponents)."""
        fs = tuple((ExactComplex.coerce(a), ExactComplex.coerce(b)) for a, b in factors)
        ms = tuple(Member(lab, ComplexPoly.exact(coeffs), tuple(int(e) for e in expo)) for lab, coeffs, expo in members)
        return cls(ms, fs, name)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.members]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def expo_matrix(self) -> np.ndarray:
        return np.array([m.expo for m in self.members], dtype=np.float64).reshape(self.size, len(self.factors))

    def _factor_arrays(self):
        roots = np.array([a.to_complex() for a, _ in self.factors], np.complex128)
        scales = np.array([b.to_complex() for _, b in self.factors], np.complex128)
        return roots, scales

    def log_abs_f(self, z) -> np.ndarray:
        """log|f_r(z)| for all members, shape (m, N)."""
        roots, scales = self._factor_arrays()
        return kernels.log_abs_members(np.ravel(np.asarray(z, np.complex128)), self.expo_matrix(), roots, scales)

    def f_value(self, r: int, z):
        """f_r(z) at the current mpmath precision."""
        z = mpmath.mpc(z) if not isinstance(z, mpmath.mpc) else z
        acc = mpmath.mpc(1)
        for (alpha, beta), e in zip(self.factors, self.members[r].expo):
            if e:
                acc *= ((z - alpha.to_mpc()) / beta.to_mpc()) ** e
        return acc

    def log_f_complex(self, z) -> np.ndarray:
        """Principal-branch-free log f_r(z) (sum of factor logs), shape (m, N); used for arguments."""
        roots, scales = self._factor_arrays()
        z = np.ravel(np.asarray(z, np.complex128))
        with np.errstate(divide="ignore"):
            lq = np.log(z[None, :] - roots[:, None]) - np.log(scales)[:, None]
        return self.expo_matrix() @ lq

    def power_sum(self, n: int) -> ProductPowerSum:
        return ProductPowerSum(
            [m.a for m in self.members],
            [[n * e for e in m.expo] for m in self.members],
            [a for a, _ in self.factors],
            [b for _, b in self.factors],
        )

    def degree(self, n: int) -> int:
        return self.power_sum(n).degree

    def scaled(self, c) -> "AnalyticFamily":
        """Every a_r multiplied by the same constant."""
        return AnalyticFamily(
            tuple(Member(m.label, m.a.scale(ExactComplex.coerce(c)), m.expo) for m in self.members),
            self.factors,
            self.name,
        )

    def net_exponents(self, r: int, s: int) -> dict[ExactComplex, int]:
        """Exponent of each distinct alpha in f_r / f_s."""
        out: dict[ExactComplex, int] = {}
        for (alpha, _), er, es in zip(self.factors, self.members[r].expo, self.members[s].expo):
            out[alpha] = out.get(alpha, 0) + er - es
        return {a: e for a, e in out.items() if e}

    def log_abs_ratio_constant(self, r: int, s: int) -> float:
        """log|f_r/f_s| when the ratio is constant (scales only)."""
        acc = 0.0
        for (_, beta), er, es in zip(self.factors, self.members[r].expo, self.members[s].expo):
            acc -= (er - es) * float(mpmath.log(abs(beta.to_mpc())))
        return acc

    def degenerate_pairs(self) -> list[tuple[int, int]]:
        """Pairs whose ratio f_r/f_s is constant."""
        return [(r, s) for r in range(self.size) for s in range(r + 1, self.size) if not self.net_exponents(r, s)]


def family_from_subsets(fam: SubsetFamily) -> AnalyticFamily:
    """One member per nonzero a_s, with f_s = prod_{i in s} ((z - alpha_i)/beta_i)^(e_i)."""
    items = fam.nonzero()
    if not items:
        raise SpecError("degenerate spec: every subset coefficient vanishes")
    factors = tuple((c.alpha, c.beta) for c in fam.channels)
    members = tuple(
        Member(subset_label(s), p, tuple(c.e if r in s else 0 for r, c in enumerate(fam.channels))) for s, p in items
    )
    return AnalyticFamily(members, factors)
