"""Pure-numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_numba``; the
test-suite checks that the two agree.
"""
import numpy as np

# log|z - alpha| is clamped here when z hits a factor root exactly
LOG_FLOOR = -690.0
# stand-in for z - alpha == 0; small enough to act as a zero, large enough that
# expo / TINY stays finite
TINY = 1e-250


def product_power_sum(z, coef, expo, roots, scales):
    """Evaluate F(z) = sum_r a_r(z) * prod_j ((z - roots_j) / scales_j) ** expo[r, j].

    Returns ``(F, dF, mag)`` all multiplied by one common positive factor per
    point so nothing overflows; ``mag`` is sum_r |a_r|(|z|) |f_r(z)|, the
    running-error scale used for backward residuals.
    """
    z = np.asarray(z, dtype=np.complex128)
    m, ncoef = coef.shape
    q = roots.shape[0]

    diff = z[None, :] - roots[:, None]  # (q, N)
    diff = np.where(diff == 0, TINY * (1.0 + np.abs(roots[:, None])), diff)
    logq = np.log(diff) - np.log(scales)[:, None]  # (q, N)
    inv = 1.0 / diff

    # Horner for a, a' and the magnitude bound, all members at once
    az = np.abs(z)
    a = np.zeros((m, z.size), dtype=np.complex128)
    da = np.zeros((m, z.size), dtype=np.complex128)
    amag = np.zeros((m, z.size))
    for k in range(ncoef - 1, -1, -1):
        da = da * z + a
        a = a * z + coef[:, k][:, None]
        amag = amag * az + np.abs(coef[:, k])[:, None]

    logf = expo @ logq  # (m, N)
    dlogf = expo @ inv
    with np.errstate(divide="ignore"):
        lead = logf.real + np.log(amag)
    lead = np.where(amag > 0, lead, -np.inf)
    top = lead.max(axis=0)
    top = np.where(np.isfinite(top), top, 0.0)
    g = np.exp(logf - top[None, :])
    F = (a * g).sum(axis=0)
    dF = (da * g + a * (dlogf * g)).sum(axis=0)
    mag = (amag * np.abs(g)).sum(axis=0)
    return F, dF, mag


def aberth_correction(z, newton):
    """Aberth-Ehrlich step w_i = N_i / (1 - N_i * sum_{j != i} 1 / (z_i - z_j))."""
    d = z[:, None] - z[None, :]
    np.fill_diagonal(d, 1.0)
    r = 1.0 / d
    np.fill_diagonal(r, 0.0)
    s = r.sum(axis=1)
    return newton / (1.0 - newton * s)


def log_abs_members(z, expo, roots, scales):
    """log|f_r(z)| for every member r, shape (m, N)."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(z[None, :] - roots[:, None]))
    la = np.maximum(la, LOG_FLOOR) - np.log(np.abs(scales))[:, None]
    return expo @ la


def lu_logdet(mat):
    """Determinant by LU with partial pivoting, as (unit phase, log|det|)."""
    a = np.array(mat, dtype=np.complex128, copy=True)
    n = a.shape[0]
    phase = 1.0 + 0.0j
    logabs = 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        piv = a[p, k]
        if piv == 0:
            return 0.0 + 0.0j, -np.inf
        if p != k:
            a[[k, p]] = a[[p, k]]
            phase = -phase
        phase *= piv / abs(piv)
        logabs += np.log(abs(piv))
        if k + 1 < n:
            l = a[k + 1:, k] / piv
            a[k + 1:, k + 1:] -= np.outer(l, a[k, k + 1:])
    return phase, logabs
