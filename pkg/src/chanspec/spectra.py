"""Eigenvalues of lengthened graphs, comparison with the limit set, and eigenvectors.

Eigenvalues are the roots of F_n (never a dense eigensolver). Eigenvectors
come from inverse iteration on the sparse shifted matrix in mpmath, and the
localization report checks them against the geometric decay along channels.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
import scipy.linalg

from .errors import CapExceeded, NonConvergence, NumericError
from .graph import GraphSpec, assemble
from .limitset import (
    AnalyticFamily,
    ArcSample,
    LimitSet,
    TraceConfig,
    family_from_subsets,
    polyline_distance,
    subarc_points,
    trace_limit_set,
)
from .linalg import SingularMatrix, norm2, sparse_lu
from .pencil import DEFAULT_ORACLE_CAP, family_of, shifted_rows
from .poly import AberthConfig, Root, RootSet, aberth_roots, big, ring_seeds

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumConfig:
    precision: int = 53
    max_precision: int = 512
    grid: int = 400  # tracing resolution used for seeding and classification
    arc_radius: float = 5.0  # "on an arc" means within arc_radius / n
    isolated_scale: float = 10.0  # "isolated" means within scale / margin * (1 - margin)^n
    seed: int = 0
    seeding: str = "limitset"  # or "ring"


@dataclass(frozen=True)
class Classification:
    kind: str  # "arc", "isolated" or "unclassified"
    target: int  # arc index or isolated point index, -1 if none
    distance: float


@dataclass
class SpectrumResult:
    n: int
    roots: RootSet
    classes: list[Classification]
    precision_used: int
    limit_set: LimitSet
    degree: int
    thresholds: dict = field(default_factory=dict)

    def values(self, expand: bool = True) -> np.ndarray:
        return self.roots.values(expand)

    def count(self) -> int:
        return sum(r.multiplicity for r in self.roots.roots)

    def of_kind(self, kind: str) -> np.ndarray:
        return np.array([r.z for r, c in zip(self.roots.roots, self.classes) if c.kind == kind], np.complex128)

    def max_arc_distance(self) -> float:
        """Largest distance from a non-isolated eigenvalue to the traced arcs."""
        pts = np.array([r.z for r, c in zip(self.roots.roots, self.classes) if c.kind != "isolated"], np.complex128)
        if not pts.size or not self.limit_set.arcs:
            return 0.0
        d, _ = self.limit_set.distance(pts)
        return float(d.max())

    def rows(self) -> list[dict]:
        return [
            {
                "re": r.z.real,
                "im": r.z.imag,
                "multiplicity": r.multiplicity,
                "residual": r.residual,
                "class": c.kind if c.target < 0 else f"{c.kind}:{c.target}",
                "class_dist": c.distance,
            }
            for r, c in zip(self.roots.roots, self.classes)
        ]


# seeding ---------------------------------------------------------------------------


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    if total <= 0 or weights.sum() <= 0:
        return np.zeros(weights.size, int)
    raw = weights / weights.sum() * total
    base = np.floor(raw).astype(int)
    order = np.argsort(-(raw - base), kind="stable")
    base[order[: total - base.sum()]] += 1
    return base


def limit_set_seeds(ls: LimitSet, degree: int, rng: np.random.Generator) -> np.ndarray:
    """Seeds placed on isolated points and spread along arcs uniformly in theta."""
    seeds = [p.z for p in ls.isolated_points if p.margin > 0 for _ in range(p.multiplicity)][:degree]
    rest = degree - len(seeds)
    arcs = ls.arcs
    if arcs and rest > 0:
        spans = np.array([abs(a.theta_span) for a in arcs])
        for arc, k in zip(arcs, _largest_remainder(spans, rest)):
            if k == 0:
                continue
            frac = (np.arange(k) + 0.5) / k
            levels = arc.theta[0] + frac * (arc.theta[-1] - arc.theta[0] if not arc.closed else arc.theta_span)
            if arc.closed:
                s_ext = np.concatenate([arc.arclength, arc.arclength + arc.arclength[-1] + abs(arc.points[0] - arc.points[-1])])
                t_ext = np.concatenate([arc.theta, arc.theta + arc.theta_span])
                p_ext = np.concatenate([arc.points, arc.points])
            else:
                s_ext, t_ext, p_ext = arc.arclength, arc.theta, arc.points
            s = np.interp(levels, t_ext, s_ext)
            seeds.extend(np.interp(s, s_ext, p_ext.real) + 1j * np.interp(s, s_ext, p_ext.imag))
    seeds = np.array(seeds, np.complex128)
    if seeds.size < degree:
        x0, x1, y0, y1 = ls.bounding_box
        centre = complex((x0 + x1) / 2, (y0 + y1) / 2)
        seeds = np.concatenate([seeds, ring_seeds(degree - seeds.size, centre, (x1 - x0) / 4)])
    # break exact coincidences and symmetries without moving seeds off their arcs materially
    return seeds + ls.cell * 0.1 * (rng.standard_normal(degree) + 1j * rng.standard_normal(degree))


def _fallback_seeds(degree: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    return ring_seeds(degree, 0.0, scale, phase=float(rng.uniform(0, 2 * math.pi / max(degree, 1))))


# eigenvalues -----------------------------------------------------------------------


def classify(values: Sequence[complex], ls: LimitSet, n: int, cfg: SpectrumConfig) -> list[Classification]:
    pts = np.asarray(list(values), np.complex128)
    if ls.arcs:
        arc_d, arc_i = ls.distance(pts)
    else:
        arc_d, arc_i = np.full(pts.size, np.inf), np.full(pts.size, -1)
    iso = [(k, p) for k, p in enumerate(ls.isolated_points) if p.margin > 0]
    out = []
    for z, d, a in zip(pts, arc_d, arc_i):
        best = None
        for k, p in iso:
            radius = cfg.isolated_scale / p.margin * (1 - p.margin) ** n
            dist = abs(z - p.z)
            if dist <= radius and (best is None or dist < best[1]):
                best = (k, dist)
        if best is not None:
            out.append(Classification("isolated", best[0], float(best[1])))
        elif d <= cfg.arc_radius / n:
            out.append(Classification("arc", int(a), float(d)))
        else:
            iso_d = min((abs(z - p.z) for _, p in iso), default=math.inf)
            out.append(Classification("unclassified", -1, float(min(d, iso_d))))
    return out


def spectrum_of_family(
    fam: AnalyticFamily, n: int, cfg: SpectrumConfig | None = None, limit_set: LimitSet | None = None
) -> SpectrumResult:
    """All roots of F_n = sum a_r f_r^n, classified against the limit set."""
    cfg = cfg or SpectrumConfig()
    if n < 1:
        raise ValueError("n must be at least 1")
    full = fam.power_sum(n)
    reduced, known = full.deflate()
    degree = reduced.degree
    ls = limit_set or trace_limit_set(fam, TraceConfig(grid=cfg.grid))
    rng = np.random.default_rng(cfg.seed)
    acfg = AberthConfig(precision=cfg.precision, max_precision=cfg.max_precision)
    if degree >= 1:
        if cfg.seeding == "limitset":
            seeds = limit_set_seeds(ls, degree, rng)
        else:
            x0, x1, _, _ = ls.bounding_box
            seeds = _fallback_seeds(degree, (x1 - x0) / 2, rng)
        try:
            roots = aberth_roots(reduced, degree, seeds, acfg)
        except NonConvergence as exc:
            if cfg.seeding != "limitset":
                raise
            log.warning("limit-set seeds did not converge (%s); retrying from a ring", exc)
            roots = aberth_roots(reduced, degree, _fallback_seeds(degree, float(np.max(np.abs(seeds))) + 1, rng), acfg)
    else:
        roots = RootSet([], 0, cfg.precision)
    if known:
        with mpmath.workprec(roots.precision):
            extra = RootSet([Root(big(a), m, 0.0) for a, m in known], sum(m for _, m in known), roots.precision, known=known)
        roots = roots.merged(extra)
        roots.roots.sort(key=lambda r: (r.z.real, r.z.imag))
    classes = classify([r.z for r in roots.roots], ls, n, cfg)
    thresholds = {"arc_radius": cfg.arc_radius / n, "isolated_scale": cfg.isolated_scale}
    return SpectrumResult(n, roots, classes, roots.precision, ls, degree + sum(m for _, m in known), thresholds)


def eigenvalues(spec: GraphSpec, n: int, cfg: SpectrumConfig | None = None, limit_set: LimitSet | None = None) -> SpectrumResult:
    """Eigenvalues of A^(n) as the roots of the subset-family polynomial."""
    fam = family_from_subsets(family_of(spec))
    res = spectrum_of_family(fam, n, cfg, limit_set)
    dim = spec.dimension(n)
    if res.count() != dim:
        raise NumericError(f"found {res.count()} eigenvalues for a matrix of dimension {dim}")
    return res


# distribution statistics ------------------------------------------------------------


@dataclass(frozen=True)
class SectorCount:
    start: float
    stop: float
    count: int
    fraction_of_annulus: float
    fraction_of_all: float


def _values_of(result) -> np.ndarray:
    if isinstance(result, SpectrumResult):
        return result.values()
    return np.asarray(result, np.complex128)


def sector_statistics(result, delta: float, sectors: Sequence[tuple[float, float]], radius: float = 1.0) -> list[SectorCount]:
    """Counts of roots with |(|z| - radius)| < delta and arg z in each sector (angles taken in [0, 2 pi))."""
    z = _values_of(result)
    if z.size == 0:
        raise ValueError("empty spectrum")
    mod = np.abs(z)
    ang = np.mod(np.angle(z), 2 * np.pi)
    annulus = (mod > radius - delta) & (mod < radius + delta)
    total = int(annulus.sum())
    out = []
    for a, b in sectors:
        lo, width = a % (2 * np.pi), b - a
        inside = annulus & (np.mod(ang - lo, 2 * np.pi) < width) if width < 2 * np.pi else annulus
        c = int(inside.sum())
        out.append(SectorCount(a, b, c, c / total if total else 0.0, c / z.size))
    return out


def tube_count(result, arc: ArcSample, from_s: float, to_s: float, eps: float) -> int:
    """Number of eigenvalues within eps of the sub-arc [from_s, to_s]."""
    if to_s <= from_s:
        return 0
    pts = subarc_points(arc, from_s, to_s)
    step = float(np.max(np.abs(np.diff(pts)))) if pts.size > 1 else 0.0
    if eps < step:
        raise ValueError(f"epsilon {eps} is below the polyline resolution {step:.3g}")
    z = _values_of(result)
    return int((polyline_distance(pts, z) <= eps).sum())


def ring_gap(result, theta: float, n: int, halfwidth: float | None = None, delta: float = 0.5, radius: float = 1.0) -> float:
    """Spread of |z| among roots near the ring |z| = radius whose argument is within halfwidth of theta.

    The angular window defaults to 1.5 pi / n; roots further than delta from
    the ring (isolated roots) are ignored.
    """
    z = _values_of(result)
    z = z[np.abs(np.abs(z) - radius) < delta]
    hw = 1.5 * np.pi / n if halfwidth is None else halfwidth
    d = np.abs(np.angle(z * np.exp(-1j * theta)))
    sel = np.abs(z[d <= hw])
    if sel.size < 2:
        raise ValueError("fewer than two roots in the angular window")
    return float(sel.max() - sel.min())


# eigenvectors -------------------------------------------------------------------------


class NotAnEigenvalue(NumericError):
    pass


@dataclass
class EigenPair:
    value: mpmath.mpc
    vector: list
    residual: float  # ||(A - lambda I) v||_2 with ||v||_2 = 1
    precision: int
    shift: mpmath.mpc

    def abs_vector(self) -> np.ndarray:
        return np.array([float(abs(x)) for x in self.vector])


def _apply(mat, v):
    out = [mpmath.mpc(0)] * mat.dimension
    for (i, j), w in mat.entries.items():
        out[i] += w.to_mpc() * v[j]
    return out


def default_jitter(bits: int) -> float:
    return 2.0**-30 if bits <= 53 else 2.0 ** (-bits / 2)


def eigenvector(
    spec: GraphSpec,
    n: int,
    lam,
    bits: int = 128,
    iterations: int = 3,
    jitter: float | None = None,
    seed: int = 0,
    accept: float | None = None,
    cap: int = 20000,
) -> EigenPair:
    """Inverse iteration with shift lam * (1 + jitter) on the sparse matrix."""
    mat = assemble(spec, n)
    if mat.dimension > cap:
        raise CapExceeded(f"eigenvector solve limited to dimension {cap}, got {mat.dimension}")
    jit = default_jitter(bits) if jitter is None else jitter
    accept = 2.0 ** (-bits / 4) if accept is None else accept
    rng = np.random.default_rng(seed)
    with mpmath.workprec(bits):
        lam = big(lam)
        shift = lam * (1 + jit) if lam != 0 else mpmath.mpc(jit)
        try:
            lu = sparse_lu(shifted_rows(mat, shift))
        except SingularMatrix:
            shift = lam * (1 + 2 * jit) + jit
            lu = sparse_lu(shifted_rows(mat, shift))
        v = [mpmath.mpc(float(a), float(b)) for a, b in rng.standard_normal((mat.dimension, 2))]
        for _ in range(iterations):
            v = lu.solve(v)
            nv = norm2(v)
            if not mpmath.isfinite(nv) or nv == 0:
                raise NumericError("inverse iteration broke down")
            v = [x / nv for x in v]
        # fix the phase so the largest entry is real positive, for reproducible output
        big_i = max(range(len(v)), key=lambda i: abs(v[i]))
        ph = abs(v[big_i]) / v[big_i]
        v = [x * ph for x in v]
        av = _apply(mat, v)
        res = float(norm2([a - lam * x for a, x in zip(av, v)]))
    if res > accept * max(1.0, float(abs(lam))):
        raise NotAnEigenvalue(f"{complex(lam)} is not an eigenvalue: residual {res:.3g}")
    return EigenPair(lam, v, res, bits, shift)


# localization --------------------------------------------------------------------------


@dataclass
class ChannelLocalization:
    channel: int
    circle_center: complex
    circle_radius: float
    distance_to_circle: float
    ratio: float  # |(lambda - alpha) / beta|
    decay: float  # min(ratio, 1 / ratio)
    direction: str  # decaying-forward | decaying-backward | flat | zero
    profile: list[float]
    recurrence_residual: float  # max |beta v_{i+1} - (lambda - alpha) v_i| / ||v||
    geometric_ok: bool
    ratio_a: float
    ratio_d: float
    ratio_ok: bool

    @property
    def certificate(self) -> str | None:
        if self.direction == "zero":
            return "zero"
        if self.geometric_ok and self.decay < 1:
            return "geometric"
        if self.ratio_ok:
            return "bounded-ratio"
        return None

    def to_json(self) -> dict:
        return {
            "channel": self.channel + 1,
            "circle": {"center": [self.circle_center.real, self.circle_center.imag], "radius": self.circle_radius},
            "distance_to_circle": self.distance_to_circle,
            "ratio": self.ratio,
            "decay": self.decay,
            "direction": self.direction,
            "max_abs": max(self.profile, default=0.0),
            "profile": self.profile,
            "recurrence_residual": self.recurrence_residual,
            "geometric_ok": self.geometric_ok,
            "ratio_bound": {"a": self.ratio_a, "d": self.ratio_d, "ok": self.ratio_ok},
            "certificate": self.certificate,
        }


@dataclass
class LocalizationReport:
    eigenvalue: complex
    n: int
    channels: list[ChannelLocalization]
    ladder: list[int]
    junction_mass: list[float]  # ||v restricted to C_{n,N}||_2 with ||v||_2 = 1
    mass_bound: list[float]  # h c^(2(N-1)) / (1 - c^2), compared with the squared mass
    c: float
    junction_weights: dict

    @property
    def mass_ok(self) -> bool:
        return all(m * m <= b * (1 + 1e-9) for m, b in zip(self.junction_mass, self.mass_bound))

    @property
    def dichotomy_ok(self) -> bool:
        return all(ch.certificate is not None for ch in self.channels)

    def to_json(self) -> dict:
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "n": self.n,
            "normalized": True,
            "c": self.c,
            "channels": [ch.to_json() for ch in self.channels],
            "junction_mass": [{"N": N, "mass": m, "bound": b} for N, m, b in zip(self.ladder, self.junction_mass, self.mass_bound)],
            "junction_weights": self.junction_weights,
            "mass_ok": self.mass_ok,
            "dichotomy_ok": self.dichotomy_ok,
        }


def localization_report(spec: GraphSpec, n: int, pair: EigenPair, slack: float = 0.1) -> LocalizationReport:
    mat = assemble(spec, n)
    with mpmath.workprec(pair.precision):
        v = pair.vector
        lam = pair.value
        vnorm = norm2(v)
        zero_tol = max(1e-14, 100 * pair.residual) * float(vnorm)
        chans = []
        for r, ch in enumerate(spec.channels):
            rows = list(mat.channel_rows(r))
            seg = [v[i] for i in rows]
            alpha, beta = ch.alpha.to_mpc(), ch.beta.to_mpc()
            ratio = float(abs((lam - alpha) / beta))
            decay = min(ratio, 1 / ratio) if ratio > 0 else 0.0
            prof = [float(abs(x)) for x in seg]
            rec = max((float(abs(beta * seg[i + 1] - (lam - alpha) * seg[i])) for i in range(len(seg) - 1)), default=0.0)
            rec /= float(vnorm)
            if max(prof) <= zero_tol:
                direction = "zero"
            elif abs(ratio - 1) <= 1e-12:
                direction = "flat"
            else:
                direction = "decaying-forward" if ratio < 1 else "decaying-backward"
            L = len(prof)
            # |v_i| <= c^(i-1) |v_1| forward, or |v_i| <= c^(L-i) |v_L| backward
            if direction == "decaying-forward":
                geo = all(prof[i] <= decay**i * prof[0] * (1 + 1e-6) + zero_tol for i in range(L))
            elif direction == "decaying-backward":
                geo = all(prof[i] <= decay ** (L - 1 - i) * prof[-1] * (1 + 1e-6) + zero_tol for i in range(L))
            else:
                geo = False
            a = n * abs(ratio - 1)
            d = math.exp(2 * a * ch.e) * (1 + slack)
            nz = [p for p in prof if p > zero_tol]
            ok = bool(nz) and len(nz) == L and max(nz) / min(nz) <= d
            dist = abs(float(abs(lam - alpha)) - float(abs(beta)))
            chans.append(
                ChannelLocalization(r, complex(alpha), float(abs(beta)), dist, ratio, decay, direction, prof, rec, geo, a, d, ok)
            )
        c = max((ch.decay for ch in chans), default=0.0)
        longest = max(n * ch.e for ch in spec.channels)
        ladder = []
        N = 1
        while N <= (longest + 1) // 2:
            ladder.append(N)
            N *= 2
        masses, bounds = [], []
        for N in ladder:
            acc = mpmath.mpf(0)
            for r, ch in enumerate(spec.channels):
                rows = list(mat.channel_rows(r))
                for pos in range(N, n * ch.e - N + 1):  # 1-based positions N..ne-N
                    acc += abs(v[rows[pos - 1]]) ** 2
            masses.append(float(mpmath.sqrt(acc) / vnorm))
            bounds.append(len(spec.channels) * c ** (2 * (N - 1)) / (1 - c * c) if c < 1 else math.inf)
        jw = {vid: float(abs(v[mat.junction_row(vid)]) / vnorm) for vid in spec.junction_vertices}
    return LocalizationReport(complex(lam), n, chans, ladder, masses, bounds, c, jw)


# resolvent -------------------------------------------------------------------------------


@dataclass
class ResolventGrid:
    x: np.ndarray
    y: np.ndarray
    log10_norm: np.ndarray  # nan where skipped
    skipped: list

    def rows(self) -> list[dict]:
        out = []
        for i, yy in enumerate(self.y):
            for j, xx in enumerate(self.x):
                out.append({"re": float(xx), "im": float(yy), "log10_norm": float(self.log10_norm[i, j])})
        return out


def resolvent_norm(a: np.ndarray, z: complex, iterations: int = 30, seed: int = 0) -> float:
    """||(zI - A)^-1||_2 by power iteration on the inverse using one LU factorization."""
    b = z * np.eye(a.shape[0]) - a
    with warnings.catch_warnings():
        # exact singularity is detected just below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(b, check_finite=False)
    if np.min(np.abs(np.diag(lu))) <= np.finfo(float).eps * np.max(np.abs(np.diag(lu))):
        raise SingularMatrix("z is numerically an eigenvalue")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iterations):
        y = scipy.linalg.lu_solve((lu, piv), x, check_finite=False)
        w = scipy.linalg.lu_solve((lu, piv), y, trans=2, check_finite=False)
        nw = np.linalg.norm(w)
        new = math.sqrt(nw)
        if nw == 0 or not np.isfinite(nw):
            break
        x = w / nw
        if abs(new - est) <= 1e-10 * new:
            est = new
            break
        est = new
    return est


def resolvent_grid(
    spec: GraphSpec, n: int, x: Sequence[float], y: Sequence[float], iterations: int = 30, seed: int = 0, cap: int = DEFAULT_ORACLE_CAP
) -> ResolventGrid:
    mat = assemble(spec, n)
    if mat.dimension > cap:
        raise CapExceeded(f"resolvent grid limited to dimension {cap}, got {mat.dimension}")
    a = mat.dense(cap)
    x, y = np.asarray(x, float), np.asarray(y, float)
    out = np.full((y.size, x.size), np.nan)
    skipped = []
    for i, yy in enumerate(y):
        for j, xx in enumerate(x):
            try:
                out[i, j] = math.log10(resolvent_norm(a, complex(xx, yy), iterations, seed))
            except SingularMatrix:
                skipped.append((float(xx), float(yy)))
    return ResolventGrid(x, y, out, skipped)
