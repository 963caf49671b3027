"""Sparse LU with partial pivoting over mpmath complex numbers.

Used as the independent determinant oracle and for high-precision inverse
iteration. Rows are dicts ``col -> value``; channel blocks are bidiagonal so
fill-in stays confined to junction rows and columns.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath


@dataclass
class SparseLU:
    size: int
    pivots: list  # (pivot row id, U row dict) per column
    multipliers: list  # per column: list of (row id, l)
    sign: int
    min_pivot_ratio: float  # smallest |pivot| / largest |entry| seen, singularity indicator

    def logdet(self):
        """(phase, log|det|) as mpmath values."""
        phase = mpmath.mpc(self.sign)
        logabs = mpmath.mpf(0)
        for k, (_, urow) in enumerate(self.pivots):
            p = urow[k]
            phase *= p / abs(p)
            logabs += mpmath.log(abs(p))
        return phase, logabs

    def det(self):
        d = mpmath.mpc(self.sign)
        for k, (_, urow) in enumerate(self.pivots):
            d *= urow[k]
        return d

    def solve(self, b):
        x = list(b)
        for k, ls in enumerate(self.multipliers):
            p = self.pivots[k][0]
            bp = x[p]
            if bp != 0:
                for i, l in ls:
                    x[i] -= l * bp
        out = [mpmath.mpc(0)] * self.size
        for k in range(self.size - 1, -1, -1):
            p, urow = self.pivots[k]
            acc = x[p]
            for j, v in urow.items():
                if j != k:
                    acc -= v * out[j]
            out[k] = acc / urow[k]
        return out


class SingularMatrix(ArithmeticError):
    pass


def sparse_lu(rows: list[dict]) -> SparseLU:
    n = len(rows)
    rows = [dict(r) for r in rows]
    colrows: list[set] = [set() for _ in range(n)]
    biggest = mpmath.mpf(0)
    for i, r in enumerate(rows):
        for j, v in r.items():
            colrows[j].add(i)
            biggest = max(biggest, abs(v))
    alive = [True] * n
    pivots = []
    mults = []
    order = []
    min_ratio = mpmath.inf
    for k in range(n):
        cands = [i for i in colrows[k] if alive[i] and rows[i].get(k, 0) != 0]
        if not cands:
            raise SingularMatrix(f"structurally or exactly singular at column {k}")
        p = max(cands, key=lambda i: abs(rows[i][k]))
        urow = rows[p]
        piv = urow[k]
        min_ratio = min(min_ratio, abs(piv) / biggest if biggest else mpmath.inf)
        alive[p] = False
        ls = []
        for i in cands:
            if i == p:
                continue
            ri = rows[i]
            l = ri.pop(k) / piv
            ls.append((i, l))
            for j, v in urow.items():
                if j == k:
                    continue
                if j in ri:
                    ri[j] -= l * v
                else:
                    ri[j] = -l * v
                    colrows[j].add(i)
        pivots.append((p, urow))
        mults.append(ls)
        order.append(p)
    return SparseLU(n, pivots, mults, _perm_sign(order), float(min_ratio))


def _perm_sign(perm: list[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def norm2(v) -> mpmath.mpf:
    return mpmath.sqrt(mpmath.fsum(abs(x) ** 2 for x in v))
