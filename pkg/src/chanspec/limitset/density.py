"""Zero densities along traced arcs and sub-arc selection."""
from __future__ import annotations

import warnings

import numpy as np

from .tracing import ArcSample


class EndpointWarning(UserWarning):
    """A density integral reaches an open arc's endpoint, where the density is not controlled."""


def _unrolled(arc: ArcSample, copies: int = 1):
    """Arrays extended periodically for closed arcs so sub-arcs may wrap."""
    if not arc.closed:
        return arc.arclength, arc.theta, arc.rho, arc.points
    close = abs(arc.points[0] - arc.points[-1])
    total = arc.arclength[-1] + close
    turn = arc.theta_span
    shifts = range(-copies, copies + 1)
    s = np.concatenate([arc.arclength + k * total for k in shifts])
    th = np.concatenate([arc.theta + k * turn for k in shifts])
    rho = np.tile(arc.rho, len(shifts))
    pts = np.tile(arc.points, len(shifts))
    return s, th, rho, pts


def density_integral(arc: ArcSample, from_s: float, to_s: float) -> float:
    """Trapezoidal integral of rho over arclength in [from_s, to_s]."""
    if to_s < from_s:
        from_s, to_s = to_s, from_s
    if to_s == from_s:
        return 0.0
    if not arc.closed and (from_s <= 0.0 or to_s >= arc.length):
        warnings.warn("density integral touches an arc endpoint", EndpointWarning, stacklevel=2)
    s, _, rho, _ = _unrolled(arc)
    inside = (s > from_s) & (s < to_s)
    xs = np.concatenate([[from_s], s[inside], [to_s]])
    ys = np.interp(xs, s, rho)
    return float(np.trapezoid(ys, xs))


def theta_increment(arc: ArcSample, from_s: float, to_s: float) -> float:
    """(theta(to_s) - theta(from_s)) / 2 pi, the same quantity without quadrature."""
    s, th, _, _ = _unrolled(arc)
    return float((np.interp(to_s, s, th) - np.interp(from_s, s, th)) / (2 * np.pi))


def subarc_by_theta(arc: ArcSample, center: complex, span: float) -> tuple[float, float]:
    """Arclength interval of the sub-arc with theta-span ``span`` centred at the sample nearest ``center``."""
    j = int(np.argmin(np.abs(arc.points - center)))
    s, th, _, _ = _unrolled(arc)
    t0 = arc.theta[j]
    lo, hi = t0 - span / 2, t0 + span / 2
    if not arc.closed and (lo <= arc.theta[0] or hi >= arc.theta[-1]):
        raise ValueError("requested theta span does not fit inside the arc")
    return float(np.interp(lo, th, s)), float(np.interp(hi, th, s))


def subarc_points(arc: ArcSample, from_s: float, to_s: float) -> np.ndarray:
    """Polyline of the sub-arc, with interpolated endpoints."""
    s, _, _, pts = _unrolled(arc)
    inside = (s > from_s) & (s < to_s)
    ends = np.interp([from_s, to_s], s, pts.real) + 1j * np.interp([from_s, to_s], s, pts.imag)
    return np.concatenate([[ends[0]], pts[inside], [ends[1]]])
