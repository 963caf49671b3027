"""Tracing tie curves |f_r| = |f_s| that dominate every other member.

Each pair's tie set is extracted by marching squares on
phi = log|f_r| - log|f_s|, crossings are refined by bisection along grid
edges, points where a third member is not strictly below are dropped, and
the survivors are chained cell by cell into polylines. Polylines are split
wherever arg(f_r / f_s) stops being monotone and are oriented so that it
increases.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..errors import NumericError
from ..poly.aberth import AberthConfig, poly_roots
from .family import AnalyticFamily

log = logging.getLogger(__name__)

# irrational fractions of a cell used to offset the grid off symmetry lines
_OFFSET_X = math.sqrt(5) - 2
_OFFSET_Y = math.sqrt(2) - 1


@dataclass(frozen=True)
class TraceConfig:
    grid: int = 800
    tie_tol: float = 1e-9
    dom_margin: float = 1e-6
    bisect_steps: int = 60
    max_expand: int = 6
    box: tuple | None = None  # (xmin, xmax, ymin, ymax); computed when None
    min_points: int = 3


@dataclass
class ArcSample:
    pair: tuple[str, str]
    points: np.ndarray
    arclength: np.ndarray
    theta: np.ndarray
    rho: np.ndarray
    closed: bool = False

    @property
    def length(self) -> float:
        return float(self.arclength[-1]) if self.arclength.size else 0.0

    @property
    def theta_span(self) -> float:
        if not self.theta.size:
            return 0.0
        span = float(self.theta[-1] - self.theta[0])
        if self.closed:
            return 2 * np.pi * round(span / (2 * np.pi))
        return span

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "closed": self.closed,
            "points": [[float(z.real), float(z.imag)] for z in self.points],
            "arclength": [float(x) for x in self.arclength],
            "theta": [float(x) for x in self.theta],
            "rho": [float(x) for x in self.rho],
        }

    def reversed_pair(self) -> "ArcSample":
        """Same curve labelled (s, r): the argument flips sign, so the orientation flips too."""
        pts = self.points[::-1]
        s = self.arclength[-1] - self.arclength[::-1]
        th = -self.theta[::-1]
        return ArcSample((self.pair[1], self.pair[0]), pts, s, th, self.rho[::-1].copy(), self.closed)


@dataclass
class IsolatedPoint:
    z: complex
    label: str
    margin: float
    ambiguous: bool = False
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "label": self.label,
            "margin": self.margin,
            "ambiguous": self.ambiguous,
            "multiplicity": self.multiplicity,
        }


@dataclass
class LimitSet:
    arcs: list[ArcSample]
    isolated_points: list[IsolatedPoint]
    bounding_box: tuple[float, float, float, float]
    cell: float
    singular_points: list[complex] = field(default_factory=list)
    degenerate_pairs: list[tuple[str, str]] = field(default_factory=list)
    expansions: int = 0
    touches_boundary: bool = False

    def arcs_for(self, r: str, s: str) -> list[ArcSample]:
        out = [a for a in self.arcs if a.pair == (r, s)]
        out += [a.reversed_pair() for a in self.arcs if a.pair == (s, r)]
        return out

    def distance(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Distance from each z to the nearest arc polyline, plus that arc's index."""
        z = np.atleast_1d(np.asarray(z, np.complex128))
        best = np.full(z.size, np.inf)
        which = np.full(z.size, -1)
        for k, arc in enumerate(self.arcs):
            d = polyline_distance(arc.points, z, closed=arc.closed)
            upd = d < best
            best[upd] = d[upd]
            which[upd] = k
        return best, which

    def to_json(self) -> dict:
        return {
            "bounding_box": list(self.bounding_box),
            "cell": self.cell,
            "expansions": self.expansions,
            "touches_boundary": self.touches_boundary,
            "arcs": [a.to_json() for a in self.arcs],
            "isolated_points": [p.to_json() for p in self.isolated_points],
            "singular_points": [[z.real, z.imag] for z in self.singular_points],
            "degenerate_pairs": [list(p) for p in self.degenerate_pairs],
        }


def polyline_distance(points: np.ndarray, z: np.ndarray, closed: bool = False) -> np.ndarray:
    """Euclidean distance from points z to a polyline (vectorized over segments)."""
    p = np.asarray(points, np.complex128)
    if closed and p.size > 1:
        p = np.append(p, p[0])
    if p.size == 1:
        return np.abs(z - p[0])
    a = p[:-1][None, :]
    d = (p[1:] - p[:-1])[None, :]
    zz = z[:, None]
    dd = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, ((zz - a) * np.conj(d)).real / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.min(np.abs(zz - (a + t * d)), axis=1)


# bounding box -----------------------------------------------------------------


def default_box(fam: AnalyticFamily) -> tuple[float, float, float, float]:
    pts = []
    rads = []
    used = [any(m.expo[j] for m in fam.members) for j in range(len(fam.factors))]
    for (alpha, beta), u in zip(fam.factors, used):
        if u:
            pts.append(alpha.to_complex())
            rads.append(2 * (abs(beta.to_complex()) + 1))
    for m in fam.members:
        if m.a.degree >= 1:
            for r in poly_roots(m.a).values(expand=False):
                pts.append(r)
                rads.append(1.0)
    if not pts:
        return (-2.0, 2.0, -2.0, 2.0)
    xs = [p.real - r for p, r in zip(pts, rads)] + [p.real + r for p, r in zip(pts, rads)]
    ys = [p.imag - r for p, r in zip(pts, rads)] + [p.imag + r for p, r in zip(pts, rads)]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    half = max(max(xs) - min(xs), max(ys) - min(ys)) / 2
    return (cx - half, cx + half, cy - half, cy + half)


def _expand(box, factor=1.5):
    x0, x1, y0, y1 = box
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    hx, hy = (x1 - x0) / 2 * factor, (y1 - y0) / 2 * factor
    return (cx - hx, cx + hx, cy - hy, cy + hy)


# one pass over a fixed box ---------------------------------------------------------


@dataclass
class _Grid:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray  # (ny, nx)
    logs: np.ndarray  # (m, ny, nx)


def _make_grid(fam: AnalyticFamily, box, res: int) -> _Grid:
    x0, x1, y0, y1 = box
    dx = (x1 - x0) / res
    dy = (y1 - y0) / res
    x = x0 + dx * (np.arange(res + 1) + _OFFSET_X - 0.5)
    y = y0 + dy * (np.arange(res + 1) + _OFFSET_Y - 0.5)
    z = x[None, :] + 1j * y[:, None]
    logs = fam.log_abs_f(z.ravel()).reshape(fam.size, *z.shape)
    return _Grid(x, y, z, logs)


def _bisect(fam, r, s, za, zb, pa, steps):
    """Refine zeros of log|f_r| - log|f_s| on segments [za, zb]; pa is phi at za."""
    lo, hi = za.copy(), zb.copy()
    sign_lo = pa > 0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        L = fam.log_abs_f(mid)
        pm = L[r] - L[s]
        same = (pm > 0) == sign_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    zr = 0.5 * (lo + hi)
    return zr, fam.log_abs_f(zr)


def _chain(ncells_x, ncells_y, hmask, vmask):
    """Link crossing edges through cells; returns (edge keys, neighbour lists, saddle cells)."""
    keys = [("h", i, j) for i, j in zip(*np.nonzero(hmask))] + [("v", i, j) for i, j in zip(*np.nonzero(vmask))]
    where = {k: n for n, k in enumerate(keys)}
    nbrs = [[] for _ in keys]
    saddles = []
    ci, cj = np.nonzero(
        hmask[:-1, :].astype(np.int8)
        + hmask[1:, :].astype(np.int8)
        + vmask[:, :-1].astype(np.int8)
        + vmask[:, 1:].astype(np.int8)
    )
    for i, j in zip(ci, cj):
        edges = [e for e in (("h", i, j), ("h", i + 1, j), ("v", i, j), ("v", i, j + 1)) if e in where]
        if len(edges) == 2:
            a, b = where[edges[0]], where[edges[1]]
            nbrs[a].append(b)
            nbrs[b].append(a)
        elif len(edges) == 4:
            saddles.append((i, j))
    return keys, nbrs, saddles


def _walk(nbrs):
    """Split the max-degree-2 graph into paths and cycles (lists of node ids)."""
    seen = [False] * len(nbrs)
    out = []
    for start in [k for k in range(len(nbrs)) if len(nbrs[k]) <= 1] + list(range(len(nbrs))):
        if seen[start]:
            continue
        path = [start]
        seen[start] = True
        prev, cur = None, start
        closed = False
        while True:
            nxt = [x for x in nbrs[cur] if x != prev]
            if not nxt:
                break
            x = nxt[0]
            if x == start:
                closed = True
                break
            if seen[x]:
                break
            seen[x] = True
            path.append(x)
            prev, cur = cur, x
        out.append((path, closed and len(path) > 2))
    return out


def _runs(ok: np.ndarray, closed: bool):
    """Maximal runs of True in ok; a cycle is rotated so runs do not wrap."""
    n = ok.size
    if closed and ok.all():
        return [(np.arange(n), True)]
    idx = np.arange(n)
    if closed:
        first_bad = int(np.argmin(ok))
        idx = np.roll(idx, -first_bad)
        ok = ok[idx]
    runs = []
    cur = []
    for k, good in zip(idx, ok):
        if good:
            cur.append(k)
        elif cur:
            runs.append((np.array(cur), False))
            cur = []
    if cur:
        runs.append((np.array(cur), False))
    return runs


def _monotone_pieces(theta: np.ndarray, closed: bool):
    """Split index range where the increments of theta change sign."""
    n = theta.size
    if n < 3:
        return [(np.arange(n), False)]
    d = np.diff(theta)
    sgn = np.sign(d)
    scale = np.max(np.abs(d)) if d.size else 0.0
    sgn[np.abs(d) <= 1e-12 * max(scale, 1e-300)] = 0
    if closed:
        wrap = theta[0] - theta[-1]
        if (sgn >= 0).all() or (sgn <= 0).all():
            return [(np.arange(n), True)]
    pieces = []
    start = 0
    cur = 0
    for k, s in enumerate(sgn):
        if s == 0:
            continue
        if cur == 0:
            cur = s
        elif s != cur:
            pieces.append((np.arange(start, k + 1), False))
            start = k
            cur = s
    pieces.append((np.arange(start, n), False))
    return pieces


def _arc_from(points: np.ndarray, theta: np.ndarray, pair, closed: bool) -> ArcSample:
    if theta[-1] < theta[0] or (closed and np.sum(np.diff(theta)) < 0):
        points, theta = points[::-1], theta[::-1]
    seg = np.abs(np.diff(points))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    rho = np.empty_like(theta)
    if closed and points.size > 2:
        # around a closed tie curve arg(f_r/f_s) turns by a whole number of revolutions
        turn = 2 * np.pi * round((theta[-1] - theta[0]) / (2 * np.pi))
        close = abs(points[0] - points[-1])
        ext_s = np.concatenate([[-close], s, [s[-1] + close]])
        ext_t = np.concatenate([[theta[-1] - turn], theta, [theta[0] + turn]])
        rho = (ext_t[2:] - ext_t[:-2]) / (2 * np.pi * (ext_s[2:] - ext_s[:-2]))
    else:
        rho[1:-1] = (theta[2:] - theta[:-2]) / (2 * np.pi * (s[2:] - s[:-2]))
        rho[0] = (theta[1] - theta[0]) / (2 * np.pi * max(s[1] - s[0], 1e-300))
        rho[-1] = (theta[-1] - theta[-2]) / (2 * np.pi * max(s[-1] - s[-2], 1e-300))
    return ArcSample(tuple(pair), points, s, theta, rho, closed)


def _trace_box(fam: AnalyticFamily, box, cfg: TraceConfig):
    g = _make_grid(fam, box, cfg.grid)
    m = fam.size
    degenerate = set(fam.degenerate_pairs())
    arcs: list[ArcSample] = []
    singular: list[complex] = []
    touches = False
    log_keep = math.log1p(-cfg.dom_margin)
    ny, nx = g.z.shape
    cell = (box[1] - box[0]) / cfg.grid
    for r in range(m):
        for s in range(r + 1, m):
            if (r, s) in degenerate:
                continue
            phi = g.logs[r] - g.logs[s]
            pos = phi > 0
            hmask = pos[:, :-1] != pos[:, 1:]
            vmask = pos[:-1, :] != pos[1:, :]
            if not hmask.any() and not vmask.any():
                continue
            keys, nbrs, saddles = _chain(nx - 1, ny - 1, hmask, vmask)
            za = np.array([g.z[i, j] for _, i, j in keys])
            zb = np.array([g.z[i, j + 1] if kind == "h" else g.z[i + 1, j] for kind, i, j in keys])
            pa = np.array([phi[i, j] for _, i, j in keys])
            zr, L = _bisect(fam, r, s, za, zb, pa, cfg.bisect_steps)
            tie = 0.5 * (L[r] + L[s])
            others = [t for t in range(m) if t not in (r, s)]
            if others:
                ok = L[others].max(axis=0) <= tie + log_keep
            else:
                ok = np.ones(zr.size, bool)
            # refinement may stall next to a factor root; drop points that never tied
            ok &= np.abs(L[r] - L[s]) <= cfg.tie_tol * np.maximum(1.0, np.abs(tie)) + 1e-6
            # tie curves cross at critical points of f_r / f_s; cut the chains there
            for zc in _tie_nodes(fam, r, s, cfg):
                near = np.abs(zr - zc) <= 1.5 * cell
                if near.any():
                    ok &= ~near
                    singular.append(complex(zc))
            on_edge = np.array(
                [
                    (kind == "h" and (i == 0 or i == ny - 1)) or (kind == "v" and (j == 0 or j == nx - 1))
                    for kind, i, j in keys
                ]
            )
            if (ok & on_edge).any():
                touches = True
            for i, j in saddles:
                zc = 0.5 * (g.z[i, j] + g.z[i + 1, j + 1])
                Lc = fam.log_abs_f(np.array([zc]))[:, 0]
                if not others or Lc[others].max() <= 0.5 * (Lc[r] + Lc[s]) + 1.0:
                    singular.append(complex(zc))
            argr = fam.log_f_complex(zr)
            for path, closed in _walk(nbrs):
                path = np.array(path)
                for run, run_closed in _runs(ok[path], closed):
                    if run.size < cfg.min_points:
                        continue
                    nodes = path[run]
                    theta = np.unwrap((argr[r, nodes] - argr[s, nodes]).imag)
                    if not run_closed:
                        singular.extend([complex(zr[nodes[0]]), complex(zr[nodes[-1]])])
                    for piece, pclosed in _monotone_pieces(theta, run_closed):
                        if piece.size < cfg.min_points:
                            continue
                        arcs.append(_arc_from(zr[nodes[piece]], theta[piece], (fam.labels[r], fam.labels[s]), pclosed))
    return arcs, singular, touches, cell, [(fam.labels[r], fam.labels[s]) for r, s in sorted(degenerate)]


def _tie_nodes(fam: AnalyticFamily, r: int, s: int, cfg: TraceConfig) -> list[complex]:
    """Zeros of (f_r / f_s)' lying on the tie set |f_r| = |f_s| where the pair dominates."""
    net = [(a.to_complex(), k) for a, k in fam.net_exponents(r, s).items()]
    if len(net) < 2:
        return []
    # (f_r / f_s)' / (f_r / f_s) = sum k / (z - alpha); clear denominators
    num = np.zeros(1, complex)
    for a, k in net:
        term = np.array([complex(k)])
        for b, _ in net:
            if b != a:
                term = np.convolve(term, [1.0, -b])
        num = np.polyadd(num, term)
    num = np.trim_zeros(num, "f")
    if num.size < 2:
        return []
    cands = np.roots(num)
    L = fam.log_abs_f(cands)
    tie = 0.5 * (L[r] + L[s])
    keep = np.abs(L[r] - L[s]) <= 1e-6 * np.maximum(1.0, np.abs(tie))
    others = [t for t in range(fam.size) if t not in (r, s)]
    if others:
        keep &= L[others].max(axis=0) <= tie + math.log1p(-cfg.dom_margin)
    return [complex(z) for z in cands[keep]]


def _merge_points(pts: list[complex], radius: float) -> list[complex]:
    out: list[complex] = []
    for p in pts:
        if all(abs(p - q) > radius for q in out):
            out.append(p)
    return out


def trace_limit_set(fam: AnalyticFamily, cfg: TraceConfig | None = None, with_isolated: bool = True) -> LimitSet:
    cfg = cfg or TraceConfig()
    if cfg.grid < 4:
        raise NumericError("grid resolution must be at least 4")
    box = cfg.box or default_box(fam)
    expansions = 0
    while True:
        arcs, singular, touches, cell, degenerate = _trace_box(fam, box, cfg)
        if not touches or expansions >= cfg.max_expand or cfg.box is not None:
            break
        box = _expand(box)
        expansions += 1
        log.info("limit set touches the bounding box; expanding to %s", box)
    if touches:
        log.warning("limit set still touches the bounding box after %d expansions", expansions)
    arcs.sort(key=lambda a: (a.pair, -a.points.size))
    iso = isolated_limits(fam) if with_isolated else []
    return LimitSet(arcs, iso, tuple(box), cell, _merge_points(singular, 2 * cell), degenerate, expansions, touches)


# isolated limit points -------------------------------------------------------------

AMBIGUOUS_MARGIN = 1e-9


def isolated_limits(fam: AnalyticFamily, bits: int = 128) -> list[IsolatedPoint]:
    """Zeros of each a_r at which |f_r| strictly dominates every other member."""
    out = []
    for r, mem in enumerate(fam.members):
        if mem.a.degree < 1:
            continue
        roots = poly_roots(mem.a, AberthConfig(precision=bits))
        with mpmath.workprec(bits):
            for root in roots.roots:
                z0 = root.value
                fr = abs(fam.f_value(r, z0))
                if fr == 0:
                    continue
                worst = max((abs(fam.f_value(t, z0)) for t in range(fam.size) if t != r), default=mpmath.mpf(0))
                margin = float(1 - worst / fr)
                ambiguous = abs(margin) <= AMBIGUOUS_MARGIN
                if margin > 0 or ambiguous:
                    out.append(IsolatedPoint(complex(z0), mem.label, margin, ambiguous, root.multiplicity))
    return out
