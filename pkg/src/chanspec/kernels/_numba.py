"""numba-compiled twins of the kernels in ``_numpy``."""
import math

import numpy as np
from numba import njit

from ._numpy import LOG_FLOOR, TINY


@njit(cache=True)
def product_power_sum(z, coef, expo, roots, scales):
    m, ncoef = coef.shape
    q = roots.shape[0]
    npts = z.shape[0]
    F = np.empty(npts, dtype=np.complex128)
    dF = np.empty(npts, dtype=np.complex128)
    mag = np.empty(npts)
    logscale = np.empty(q, dtype=np.complex128)
    for j in range(q):
        logscale[j] = np.log(scales[j])
    a = np.empty(m, dtype=np.complex128)
    da = np.empty(m, dtype=np.complex128)
    amag = np.empty(m)
    logf = np.empty(m, dtype=np.complex128)
    dlogf = np.empty(m, dtype=np.complex128)
    logq = np.empty(q, dtype=np.complex128)
    inv = np.empty(q, dtype=np.complex128)
    for p in range(npts):
        zp = z[p]
        azp = abs(zp)
        for j in range(q):
            d = zp - roots[j]
            if d == 0:
                d = TINY * (1.0 + abs(roots[j]))
            logq[j] = np.log(d) - logscale[j]
            inv[j] = 1.0 / d
        top = -np.inf
        for r in range(m):
            av = 0j
            dav = 0j
            mv = 0.0
            for k in range(ncoef - 1, -1, -1):
                dav = dav * zp + av
                av = av * zp + coef[r, k]
                mv = mv * azp + abs(coef[r, k])
            a[r] = av
            da[r] = dav
            amag[r] = mv
            lf = 0j
            dl = 0j
            for j in range(q):
                e = expo[r, j]
                if e != 0.0:
                    lf += e * logq[j]
                    dl += e * inv[j]
            logf[r] = lf
            dlogf[r] = dl
            if mv > 0.0:
                lead = lf.real + math.log(mv)
                if lead > top:
                    top = lead
        if not np.isfinite(top):
            top = 0.0
        fs = 0j
        dfs = 0j
        ms = 0.0
        for r in range(m):
            g = np.exp(logf[r] - top)
            fs += a[r] * g
            dfs += da[r] * g + a[r] * (dlogf[r] * g)
            ms += amag[r] * abs(g)
        F[p] = fs
        dF[p] = dfs
        mag[p] = ms
    return F, dF, mag


@njit(cache=True)
def aberth_correction(z, newton):
    n = z.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        s = 0j
        zi = z[i]
        for j in range(n):
            if j != i:
                s += 1.0 / (zi - z[j])
        out[i] = newton[i] / (1.0 - newton[i] * s)
    return out


@njit(cache=True)
def log_abs_members(z, expo, roots, scales):
    m, q = expo.shape
    npts = z.shape[0]
    out = np.zeros((m, npts))
    la = np.empty(q)
    lsc = np.empty(q)
    for j in range(q):
        lsc[j] = math.log(abs(scales[j]))
    for p in range(npts):
        for j in range(q):
            dx = z[p].real - roots[j].real
            dy = z[p].imag - roots[j].imag
            d2 = dx * dx + dy * dy
            if d2 > 1e-300:
                v = 0.5 * math.log(d2)
            else:  # squared modulus underflows; take the slow exact path
                d = abs(z[p] - roots[j])
                v = math.log(d) if d > 0.0 else LOG_FLOOR
            if v < LOG_FLOOR:
                v = LOG_FLOOR
            la[j] = v - lsc[j]
        for r in range(m):
            acc = 0.0
            for j in range(q):
                acc += expo[r, j] * la[j]
            out[r, p] = acc
    return out


@njit(cache=True)
def lu_logdet(mat):
    a = mat.copy()
    n = a.shape[0]
    phase = 1.0 + 0.0j
    logabs = 0.0
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            v = abs(a[i, k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return 0.0 + 0.0j, -np.inf
        if p != k:
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = t
            phase = -phase
        piv = a[k, k]
        phase *= piv / abs(piv)
        logabs += math.log(abs(piv))
        for i in range(k + 1, n):
            l = a[i, k] / piv
            if l != 0:
                for j in range(k + 1, n):
                    a[i, j] -= l * a[k, j]
    return phase, logabs
