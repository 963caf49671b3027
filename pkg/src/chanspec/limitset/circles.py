"""Closed-form tie sets |f_r| = |f_s| for families built from linear factors."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .family import AnalyticFamily


@dataclass(frozen=True)
class TieDescriptor:
    """Tie set of one pair written as prod |z - alpha|^k = level.

    ``kind`` is "circle", "line", "quartic" (two factors with the same sign,
    e.g. |(z - a)(z - b)| = c), "other" or "degenerate" (constant ratio).
    """

    pair: tuple[str, str]
    kind: str
    exponents: dict = field(default_factory=dict)  # alpha (complex) -> net exponent
    level: float = 1.0
    center: complex | None = None
    radius: float | None = None
    point: complex | None = None
    direction: complex | None = None

    def distance(self, z) -> np.ndarray:
        z = np.asarray(z, np.complex128)
        if self.kind == "circle":
            return np.abs(np.abs(z - self.center) - self.radius)
        if self.kind == "line":
            d = self.direction / abs(self.direction)
            return np.abs(((z - self.point) * np.conj(d)).imag)
        raise ValueError(f"no closed-form distance for a {self.kind} tie set")

    def residual(self, z) -> np.ndarray:
        """log of prod |z - alpha|^k minus log(level); zero on the tie set."""
        z = np.asarray(z, np.complex128)
        acc = np.zeros(z.shape)
        for alpha, k in self.exponents.items():
            acc += k * np.log(np.abs(z - alpha))
        return acc - math.log(self.level)

    def to_json(self) -> dict:
        out = {
            "pair": list(self.pair),
            "kind": self.kind,
            "level": self.level,
            "exponents": [[a.real, a.imag, k] for a, k in self.exponents.items()],
        }
        for key in ("center", "point", "direction"):
            v = getattr(self, key)
            if v is not None:
                out[key] = [v.real, v.imag]
        if self.radius is not None:
            out["radius"] = self.radius
        return out


def tie_descriptor(fam: AnalyticFamily, r: int, s: int) -> TieDescriptor:
    pair = (fam.labels[r], fam.labels[s])
    net = fam.net_exponents(r, s)
    if not net:
        return TieDescriptor(pair, "degenerate")
    # |f_r / f_s| = exp(c) * prod |z - alpha|^k, so the tie is prod |z - alpha|^k = exp(-c)
    level = math.exp(-fam.log_abs_ratio_constant(r, s))
    expo = {a.to_complex(): k for a, k in net.items()}
    items = list(expo.items())
    if len(items) == 1:
        (alpha, k), = items
        return TieDescriptor(pair, "circle", expo, level, center=alpha, radius=level ** (1.0 / k))
    if len(items) == 2 and items[0][1] == -items[1][1]:
        (a1, k), (a2, _) = items
        if k < 0:
            (a1, k), (a2, _) = items[1], items[0]
        # |z - a1| = level^(1/k) |z - a2|, squared: |z - a1|^2 = delta |z - a2|^2
        delta = level ** (2.0 / k)
        if abs(delta - 1.0) <= 1e-14:
            return TieDescriptor(pair, "line", expo, level, point=(a1 + a2) / 2, direction=1j * (a2 - a1))
        c = (delta * a2 - a1) / (delta - 1)
        r2 = abs(c) ** 2 - (abs(a1) ** 2 - delta * abs(a2) ** 2) / (1 - delta)
        return TieDescriptor(pair, "circle", expo, level, center=c, radius=math.sqrt(max(r2, 0.0)))
    if len(items) == 2 and items[0][1] == items[1][1]:
        return TieDescriptor(pair, "quartic", expo, level)
    return TieDescriptor(pair, "other", expo, level)


def analytic_circles(fam: AnalyticFamily) -> list[TieDescriptor]:
    """Closed-form descriptors for every unordered pair of members."""
    return [tie_descriptor(fam, r, s) for r in range(fam.size) for s in range(r + 1, fam.size)]
