"""Aberth-Ehrlich simultaneous root finding with precision escalation.

A first phase iterates in double precision through the compiled kernels;
the survivors are then polished in mpmath at the requested precision and
escalated along the 53 -> 128 -> 256 -> 512 ladder while any backward
residual stays above tolerance.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import mpmath
import numpy as np

from .. import kernels
from ..errors import NonConvergence
from .bigcomplex import big, check_finite, ladder_from, tolerance
from .polynomial import ComplexPoly, _is_zero

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps


class Evaluator(Protocol):
    degree: int

    def eval_double(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]: ...

    def eval_mp(self, z: mpmath.mpc) -> tuple: ...


@dataclass(frozen=True)
class AberthConfig:
    precision: int = 53
    max_precision: int = 512
    max_iters: int = 500
    max_mp_iters: int = 80
    cluster_scale: float = 2.0**-20
    tol: float | None = None  # overrides 2^(-bits/2)
    escalate: bool = True

    def tol_at(self, bits: int) -> float:
        return self.tol if self.tol is not None else tolerance(bits)


@dataclass(frozen=True)
class Root:
    value: mpmath.mpc
    multiplicity: int
    residual: float

    @property
    def z(self) -> complex:
        return complex(self.value)


@dataclass
class RootSet:
    roots: list[Root]
    total_count: int
    precision: int = 53
    clusters_formed: int = 0
    known: list = field(default_factory=list)  # roots supplied exactly by deflation

    def __len__(self):
        return self.total_count

    def values(self, expand: bool = True) -> np.ndarray:
        """complex128 array, each root repeated by its multiplicity when ``expand``."""
        out = []
        for r in self.roots:
            out.extend([r.z] * (r.multiplicity if expand else 1))
        return np.array(out, dtype=np.complex128)

    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)

    def merged(self, other: "RootSet") -> "RootSet":
        return RootSet(
            self.roots + other.roots,
            self.total_count + other.total_count,
            max(self.precision, other.precision),
            self.clusters_formed + other.clusters_formed,
            self.known + other.known,
        )


def ring_seeds(degree: int, center: complex = 0.0, radius: float = 1.0, phase: float = 0.4) -> np.ndarray:
    k = np.arange(degree)
    return center + radius * np.exp(1j * (2 * np.pi * k / max(degree, 1) + phase))


def _double_phase(f: Evaluator, z: np.ndarray, cfg: AberthConfig):
    z = z.astype(np.complex128).copy()
    res = np.full(z.size, np.inf)
    for _ in range(cfg.max_iters):
        F, dF, mag = f.eval_double(z)
        with np.errstate(all="ignore"):
            res = np.where(mag > 0, np.abs(F) / mag, np.where(F == 0, 0.0, np.inf))
            newton = F / dF
        bad = ~np.isfinite(newton)
        if bad.any():
            # flat derivative or overflow: nudge instead of stepping
            newton[bad] = 1e-3 * (1 + np.abs(z[bad])) * np.exp(1j * np.arange(bad.sum()))
        w = kernels.aberth_correction(z, newton)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = newton[bad]
        z = z - w
        step = np.abs(w) / (1 + np.abs(z))
        if (res <= 16 * EPS).all() or step.max() <= 4 * EPS:
            break
    F, dF, mag = f.eval_double(z)
    with np.errstate(all="ignore"):
        res = np.where(mag > 0, np.abs(F) / mag, np.where(F == 0, 0.0, np.inf))
    return z, res


def _mp_residuals(f: Evaluator, zs):
    out = []
    vals = []
    for z in zs:
        F, dF, mag = f.eval_mp(z)
        out.append(float(abs(F) / mag) if mag != 0 else (0.0 if F == 0 else math.inf))
        vals.append((F, dF))
    return out, vals


def _mp_phase(f: Evaluator, z0: Sequence, bits: int, cfg: AberthConfig):
    tol = cfg.tol_at(bits)
    small = mpmath.mpf(2) ** int(-0.8 * bits)
    with mpmath.workprec(bits):
        zs = [big(complex(z)) if not isinstance(z, mpmath.mpc) else +z for z in z0]
        res = [math.inf] * len(zs)
        settled = 0
        for _ in range(cfg.max_mp_iters):
            res, vals = _mp_residuals(f, zs)
            newton = []
            for (F, dF), z in zip(vals, zs):
                if dF == 0:
                    newton.append(mpmath.mpc(0) if F == 0 else mpmath.mpc(small) * (1 + abs(z)))
                else:
                    newton.append(F / dF)
            maxstep = mpmath.mpf(0)
            new = []
            for i, zi in enumerate(zs):
                s = mpmath.mpc(0)
                for j, zj in enumerate(zs):
                    if j != i:
                        d = zi - zj
                        if d != 0:
                            s += 1 / d
                den = 1 - newton[i] * s
                w = newton[i] / den if den != 0 else newton[i]
                check_finite(w, "Aberth correction")
                new.append(zi - w)
                maxstep = max(maxstep, abs(w) / (1 + abs(zi)))
            zs = new
            if max(res) <= tol:
                settled += 1
                if maxstep <= small or settled >= 3:
                    break
        res, _ = _mp_residuals(f, zs)
    return zs, res


def _cluster(values: list, residuals: list, cfg: AberthConfig) -> tuple[list[Root], int]:
    zc = np.array([complex(v) for v in values], dtype=np.complex128)
    n = zc.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n > 1:
        d = np.abs(zc[:, None] - zc[None, :])
        rad = cfg.cluster_scale * (1 + np.abs(zc))
        close = d < np.maximum(rad[:, None], rad[None, :])
        ii, jj = np.nonzero(np.triu(close, 1))
        for i, j in zip(ii, jj):
            a, b = find(i), find(j)
            if a != b:
                parent[b] = a
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    roots = []
    formed = 0
    for members in groups.values():
        if len(members) > 1:
            formed += 1
            value = mpmath.fsum(values[i] for i in members) / len(members)
        else:
            value = values[members[0]]
        roots.append(Root(value, len(members), max(residuals[i] for i in members)))
    roots.sort(key=lambda r: (r.z.real, r.z.imag))
    return roots, formed


def aberth_roots(f: Evaluator, degree: int, seeds: Sequence, cfg: AberthConfig | None = None) -> RootSet:
    """All ``degree`` roots of the function evaluated by ``f``."""
    cfg = cfg or AberthConfig()
    if degree < 1:
        raise ValueError("degree must be at least 1")
    seeds = np.asarray([complex(s) for s in seeds], dtype=np.complex128)
    if seeds.size != degree:
        raise ValueError(f"need exactly {degree} seeds, got {seeds.size}")

    z, res = _double_phase(f, seeds, cfg)
    worst = float(np.max(res))
    values: list = list(z)
    residuals = list(res)
    used = 53
    for bits in ladder_from(cfg.precision, cfg.max_precision if cfg.escalate else cfg.precision):
        used = bits
        if bits <= 53:
            if worst <= cfg.tol_at(53):
                break
            continue
        values, residuals = _mp_phase(f, values, bits, cfg)
        worst = max(residuals)
        if worst <= cfg.tol_at(bits):
            break
        log.info("residual %.3g above tolerance at %d bits, escalating", worst, bits)
    else:
        raise NonConvergence(
            f"root finder did not reach tolerance: worst residual {worst:.3g} at {used} bits; "
            "try a higher precision or more iterations",
            worst_residual=worst,
            precision=used,
        )
    with mpmath.workprec(used):
        values = [big(v) if not isinstance(v, mpmath.mpc) else +v for v in values]
    roots, formed = _cluster(values, [float(r) for r in residuals], cfg)
    if formed:
        log.info("merged %d cluster(s) of coincident roots", formed)
    return RootSet(roots, degree, used, formed)


def poly_seeds(p: ComplexPoly) -> np.ndarray:
    """Ring seeds at the geometric-mean root radius of ``p``."""
    c = p.to_numpy()
    d = c.size - 1
    lead = abs(c[-1])
    low = np.nonzero(c)[0][0]
    r = (abs(c[low]) / lead) ** (1.0 / (d - low)) if d > low else 1.0
    if not np.isfinite(r) or r == 0:
        r = 1.0
    return ring_seeds(d - low, radius=r)


def poly_roots(p: ComplexPoly, cfg: AberthConfig | None = None) -> RootSet:
    """Roots of a polynomial; exact zeros at the origin are split off first."""
    cfg = cfg or AberthConfig()
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if p.degree == 0:
        return RootSet([], 0, cfg.precision)
    low = 0
    while _is_zero(p.coeffs[low]):
        low += 1
    trimmed = ComplexPoly(p.coeffs[low:], prec=p.prec) if low else p
    out = RootSet([], 0, cfg.precision)
    if trimmed.degree >= 1:
        out = aberth_roots(trimmed, trimmed.degree, poly_seeds(trimmed), cfg)
    if low:
        zero = RootSet([Root(mpmath.mpc(0), low, 0.0)], low, cfg.precision, known=[(0, low)])
        out = out.merged(zero)
        out.roots.sort(key=lambda r: (r.z.real, r.z.imag))
    return out
