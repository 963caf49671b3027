"""Reduced pencil, subset-coefficient family and determinant oracles.

Collapsing every channel r to a single point p_r gives a matrix of size
h + #J whose determinant, after substituting

    u_r = ((z - alpha_r) / beta_r) ** (n e_r)

and multiplying by k = prod_r beta_r ** (n e_r), equals det(zI - A^(n)).
Row/column order is p_1..p_h followed by the junction vertices. Entries:

    P[p_r, p_r] = u_r        P[p_r, target_r] = -1      P[source_r, p_r] = -beta_r
    junction block           zI - A_J

Each u_r occurs once, so det P is multilinear in u and its coefficients
a_s(z) (one per channel subset s) are recovered from the 2^h evaluations
u in {0,1}^h by Moebius inversion.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import mpmath
import networkx as nx
import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from . import kernels
from .errors import CapExceeded, NumericError
from .graph import AssembledMatrix, ChannelSpec, Decomposition, GraphSpec, assemble, decompose
from .linalg import SingularMatrix, sparse_lu
from .numbers import ONE, ZERO, ExactComplex
from .poly.bigcomplex import big
from .poly.factored import ProductPowerSum
from .poly.polynomial import ComplexPoly

DEFAULT_SUBSET_CAP = 20
DEFAULT_ORACLE_CAP = 400
BRUTE_CAP = 12

_Z = sympy.Symbol("z")
_RING = sympy.QQ_I[_Z]


def _ring_const(c: ExactComplex):
    return _RING.from_sympy(sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))


def _ring_to_poly(elem) -> ComplexPoly:
    if not elem:
        return ComplexPoly.exact([])
    deg = max(m[0] for m, _ in elem.items())
    coeffs = [ZERO] * (deg + 1)
    for (k,), c in elem.items():
        coeffs[k] = ExactComplex.coerce(c)
    return ComplexPoly(coeffs)


def subset_label(s) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"


@dataclass(frozen=True)
class ReducedPencil:
    decomposition: Decomposition
    labels: tuple  # ("p", r) then ("J", vertex)
    constants: dict = field(compare=False)  # (i, j) -> ExactComplex, the z- and u-free part
    z_rows: tuple = ()  # indices carrying +z on the diagonal

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def h(self) -> int:
        return self.decomposition.h

    @property
    def channel_meta(self) -> list[tuple[int, ExactComplex, ExactComplex]]:
        return [(c.e, c.alpha, c.beta) for c in self.decomposition.channels]

    def ring_matrix(self, u: Sequence[int]) -> DomainMatrix:
        """The pencil over QQ(i)[z] with each u_r replaced by the integer ``u[r]``."""
        size = self.dimension
        zero = _RING.zero
        rows = [[zero] * size for _ in range(size)]
        for (i, j), c in self.constants.items():
            rows[i][j] = _ring_const(c)
        for i in self.z_rows:
            rows[i][i] = rows[i][i] + _RING.gens[0]
        for r in range(self.h):
            rows[r][r] = rows[r][r] + _RING(int(u[r]))
        return DomainMatrix(rows, (size, size), _RING)

    def numeric_rows(self, z, u: Sequence) -> list[dict]:
        """Sparse mp rows of the pencil at a point z and numeric u values."""
        rows: list[dict] = [dict() for _ in range(self.dimension)]
        for (i, j), c in self.constants.items():
            rows[i][j] = c.to_mpc()
        for i in self.z_rows:
            rows[i][i] = rows[i].get(i, mpmath.mpc(0)) + z
        for r in range(self.h):
            rows[r][r] = rows[r].get(r, mpmath.mpc(0)) + big(u[r])
        return [{j: v for j, v in row.items() if v != 0} for row in rows]


def reduce(decomp: Decomposition) -> ReducedPencil:
    spec = decomp.spec
    h = decomp.h
    labels = tuple([("p", r) for r in range(h)] + [("J", v) for v in spec.junction_vertices])
    where = {lab: i for i, lab in enumerate(labels)}
    consts: dict[tuple[int, int], ExactComplex] = {}
    for r, c in enumerate(decomp.channels):
        consts[(r, where[("J", c.target)])] = consts.get((r, where[("J", c.target)]), ZERO) - ONE
        key = (where[("J", c.source)], r)
        consts[key] = consts.get(key, ZERO) - c.beta
    for (i, j), w in spec.weight_items:
        key = (where[("J", i)], where[("J", j)])
        consts[key] = consts.get(key, ZERO) - w
    consts = {k: v for k, v in consts.items() if not v.is_zero()}
    z_rows = tuple(range(h, len(labels)))
    return ReducedPencil(decomp, labels, consts, z_rows)


# subset family -----------------------------------------------------------------


@dataclass(frozen=True)
class SubsetFamily:
    channels: tuple[ChannelSpec, ...]
    coefficients: dict = field(compare=False)  # frozenset -> exact ComplexPoly
    junction_count: int = 0

    @property
    def h(self) -> int:
        return len(self.channels)

    def support(self) -> set[frozenset]:
        return {s for s, p in self.coefficients.items() if not p.is_zero()}

    def nonzero(self) -> list[tuple[frozenset, ComplexPoly]]:
        """Nonzero members in a fixed order: by size, then lexicographically."""
        items = [(s, p) for s, p in self.coefficients.items() if not p.is_zero()]
        items.sort(key=lambda sp: (len(sp[0]), sorted(sp[0])))
        return items

    def global_factor(self, n: int) -> list[tuple[ExactComplex, int]]:
        """k = prod beta_r ** (n e_r), kept as (beta_r, exponent) pairs."""
        return [(c.beta, n * c.e) for c in self.channels]

    def log_abs_global_factor(self, n: int) -> mpmath.mpf:
        return mpmath.fsum(e * mpmath.log(abs(b.to_mpc())) for b, e in self.global_factor(n))

    def power_sum(self, n: int) -> ProductPowerSum:
        """F_n as a ProductPowerSum with one factor per channel."""
        items = self.nonzero()
        expo = [[n * c.e if r in s else 0 for r, c in enumerate(self.channels)] for s, _ in items]
        return ProductPowerSum(
            [p for _, p in items],
            expo,
            [c.alpha for c in self.channels],
            [c.beta for c in self.channels],
        )

    def k_times_F(self, z, n: int):
        """k * F_n(z) at the current mp precision."""
        z = big(z)
        acc = mpmath.mpc(0)
        for s, p in self.nonzero():
            term = p(z)
            for r, c in enumerate(self.channels):
                L = n * c.e
                term *= (z - c.alpha.to_mpc()) ** L if r in s else c.beta.to_mpc() ** L
            acc += term
        return acc

    def expanded(self, n: int) -> ComplexPoly:
        """k * F_n expanded exactly in z (small n only)."""
        out = ComplexPoly.exact([])
        for s, p in self.nonzero():
            term = p
            for r, c in enumerate(self.channels):
                L = n * c.e
                if r in s:
                    term = term * ComplexPoly.exact([-c.alpha, 1]) ** L
                else:
                    term = term.scale(c.beta ** L)
            out = out + term
        return out

    def check_invariants(self) -> None:
        full = frozenset(range(self.h))
        top = self.coefficients.get(full)
        if top is None or top.degree != self.junction_count:
            raise NumericError(f"a_full has degree {getattr(top, 'degree', None)}, expected {self.junction_count}")
        for s, p in self.coefficients.items():
            if not p.is_zero() and p.degree > self.junction_count:
                raise NumericError(f"a_{subset_label(s)} has degree {p.degree} > #J = {self.junction_count}")


def subset_coefficients(pencil: ReducedPencil, cap: int = DEFAULT_SUBSET_CAP) -> SubsetFamily:
    h = pencil.h
    if h > cap:
        raise CapExceeded(f"{h} channels means 2^{h} subset evaluations; the cap is {cap} channels")
    dets = []
    for mask in range(1 << h):
        u = [(mask >> r) & 1 for r in range(h)]
        dets.append(pencil.ring_matrix(u).det())
    # Moebius inversion over the subset lattice
    for r in range(h):
        bit = 1 << r
        for mask in range(1 << h):
            if mask & bit:
                dets[mask] = dets[mask] - dets[mask ^ bit]
    coeffs = {}
    for mask in range(1 << h):
        s = frozenset(r for r in range(h) if (mask >> r) & 1)
        coeffs[s] = _ring_to_poly(dets[mask])
    fam = SubsetFamily(pencil.decomposition.channels, coeffs, len(pencil.decomposition.spec.junction_vertices))
    return fam


def family_of(spec: GraphSpec, cap: int = DEFAULT_SUBSET_CAP) -> SubsetFamily:
    return subset_coefficients(reduce(decompose(spec)), cap)


# determinant identity -------------------------------------------------------------


@dataclass
class IdentityReport:
    n: int
    bits: int
    samples: list
    deviations: list
    resampled: int = 0

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "precision": self.bits,
            "samples": [[float(complex(z).real), float(complex(z).imag)] for z in self.samples],
            "relative_deviation": self.deviations,
            "max_relative_deviation": self.max_deviation,
            "resampled": self.resampled,
        }


def shifted_rows(mat: AssembledMatrix, z) -> list[dict]:
    """Sparse mp rows of zI - A."""
    rows: list[dict] = [dict() for _ in range(mat.dimension)]
    for (i, j), w in mat.entries.items():
        rows[i][j] = -w.to_mpc()
    for i in range(mat.dimension):
        rows[i][i] = rows[i].get(i, mpmath.mpc(0)) + z
    return [{j: v for j, v in r.items() if v != 0} for r in rows]


@dataclass
class _DenseDet:
    phase: complex
    logabs: float
    min_pivot_ratio: float = 1.0

    def det(self):
        return mpmath.mpc(self.phase) * mpmath.exp(self.logabs)


def identity_check(
    spec: GraphSpec,
    n: int,
    samples: Sequence | None = None,
    bits: int = 128,
    count: int = 20,
    radius: float = 1.5,
    seed: int = 0,
    cap: int = DEFAULT_ORACLE_CAP,
    family: SubsetFamily | None = None,
) -> IdentityReport:
    """Compare det(zI - A^(n)) by sparse LU with k * F_n(z) at sample points."""
    mat = assemble(spec, n)
    if mat.dimension > cap:
        raise CapExceeded(f"identity check limited to dimension {cap}, got {mat.dimension}")
    fam = family or family_of(spec)
    rng = random.Random(seed)
    pending = list(samples) if samples is not None else []
    if samples is None:
        pending = [radius * complex(math.cos(t), math.sin(t)) for t in (rng.uniform(0, 2 * math.pi) for _ in range(count))]
    dense = mat.dense(cap) if bits <= 53 else None
    used, devs = [], []
    resampled = 0
    singular_tol = 2.0 ** (-bits / 2)
    with mpmath.workprec(bits):
        while pending:
            z0 = pending.pop(0)
            z = big(z0)
            if bits <= 53:
                # double precision: dense LU through the compiled kernel
                phase, logabs = kernels.lu_logdet(complex(z0) * np.eye(mat.dimension) - dense)
                lu = _DenseDet(phase, logabs) if math.isfinite(logabs) else None
            else:
                try:
                    lu = sparse_lu(shifted_rows(mat, z))
                except SingularMatrix:
                    lu = None
            if lu is None or lu.min_pivot_ratio < singular_tol:
                resampled += 1
                if resampled > 10 * max(count, 1):
                    raise NumericError("identity check could not find non-singular samples")
                t = rng.uniform(0, 2 * math.pi)
                pending.append(abs(complex(z0)) * complex(math.cos(t), math.sin(t)))
                continue
            lhs = lu.det()
            rhs = fam.k_times_F(z, n)
            scale = max(abs(lhs), abs(rhs))
            devs.append(float(abs(lhs - rhs) / scale) if scale else 0.0)
            used.append(complex(z0))
    return IdentityReport(n, bits, used, devs, resampled)


# brute-force characteristic polynomial ---------------------------------------------


def brute_char_poly(matrix, cap: int = BRUTE_CAP) -> ComplexPoly:
    """det(zI - M) by exact Faddeev-LeVerrier over Gaussian rationals."""
    if isinstance(matrix, AssembledMatrix):
        size = matrix.dimension
        a = [[ZERO] * size for _ in range(size)]
        for (i, j), w in matrix.entries.items():
            a[i][j] = w
    else:
        a = [[ExactComplex.coerce(x) for x in row] for row in matrix]
        size = len(a)
    if size > cap:
        raise CapExceeded(f"brute characteristic polynomial limited to dimension {cap}, got {size}")
    coeffs = [ZERO] * (size + 1)
    coeffs[size] = ONE
    m = [[ZERO] * size for _ in range(size)]
    for k in range(1, size + 1):
        # M_k = A M_{k-1} + c_{size-k+1} I
        prod = [[_dot(a[i], m, j, size) for j in range(size)] for i in range(size)]
        c_prev = coeffs[size - k + 1]
        for i in range(size):
            prod[i][i] = prod[i][i] + c_prev
        m = prod
        tr = ZERO
        for i in range(size):
            tr = tr + _dot(a[i], m, i, size)
        coeffs[size - k] = -(tr / k)
    return ComplexPoly(coeffs)


def _dot(row, m, j, size):
    acc = ZERO
    for t in range(size):
        x = row[t]
        if x.is_zero():
            continue
        y = m[t][j]
        if y.is_zero():
            continue
        acc = acc + x * y
    return acc


# cycle covers -------------------------------------------------------------------------


def _has_cycle_cover(nodes, edges) -> bool:
    g = nx.Graph()
    left = [("L", v) for v in nodes]
    g.add_nodes_from(left)
    g.add_nodes_from(("R", v) for v in nodes)
    g.add_edges_from((("L", a), ("R", b)) for a, b in edges)
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
    return len(matching) == 2 * len(nodes)


def cycle_cover_support(decomp: Decomposition, cap: int = DEFAULT_SUBSET_CAP) -> set[frozenset]:
    """Subsets s whose remainder graph admits a vertex-disjoint cycle cover.

    Channels in s are removed (their points are covered by the u_r entry).
    Junction vertices may cover themselves with a loop; surviving channel
    points must sit on a cycle source -> p_r -> target.
    """
    h = decomp.h
    if h > cap:
        raise CapExceeded(f"{h} channels exceeds the subset cap {cap}")
    spec = decomp.spec
    junction_edges = [(("J", i), ("J", j)) for (i, j), _ in spec.weight_items]
    junction_edges += [(("J", v), ("J", v)) for v in spec.junction_vertices]
    out = set()
    for size in range(h + 1):
        for s in combinations(range(h), size):
            keep = [r for r in range(h) if r not in s]
            nodes = [("J", v) for v in spec.junction_vertices] + [("p", r) for r in keep]
            edges = list(junction_edges)
            for r in keep:
                c = decomp.channels[r]
                edges.append((("J", c.source), ("p", r)))
                edges.append((("p", r), ("J", c.target)))
            if _has_cycle_cover(nodes, edges):
                out.add(frozenset(s))
    return out


def counting_bound(h: int, d: int) -> int:
    """sum_{k <= d} C(h, k)."""
    return sum(math.comb(h, k) for k in range(min(d, h) + 1))
