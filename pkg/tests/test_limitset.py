import math
import warnings

import numpy as np
import pytest

from chanspec import presets
from chanspec.errors import SpecError
from chanspec.limitset import (
    AnalyticFamily,
    EndpointWarning,
    TraceConfig,
    analytic_circles,
    density_integral,
    family_from_subsets,
    isolated_limits,
    subarc_by_theta,
    theta_increment,
    trace_limit_set,
)
from chanspec.limitset import tracing
from chanspec.pencil import family_of


@pytest.fixture(scope="module")
def two_circles():
    fam = presets.two_circles()
    return fam, trace_limit_set(fam)


@pytest.fixture(scope="module")
def h2k1_limit():
    fam = family_from_subsets(family_of(presets.h2k1()))
    return fam, trace_limit_set(fam)


def test_family_from_subsets_h2k1():
    fam = family_from_subsets(family_of(presets.h2k1()))
    assert fam.labels == ["{1}", "{2}", "{1,2}"]
    assert [m.expo for m in fam.members] == [(1, 0), (0, 1), (1, 1)]


def test_two_circle_family_has_four_members():
    assert presets.two_circles().size == 4


def test_invalid_family():
    with pytest.raises(SpecError):
        AnalyticFamily.build([(0, 1)], [("a", [1], (1,)), ("a", [1], (0,))])
    with pytest.raises(SpecError):
        AnalyticFamily.build([(0, 0)], [("a", [1], (1,))])
    with pytest.raises(SpecError):
        AnalyticFamily.build([(0, 1)], [("a", [0], (1,))])


def test_single_member_has_no_arcs():
    fam = AnalyticFamily.build([(0, 1)], [("a", [1, 1], (1,))])
    ls = trace_limit_set(fam, TraceConfig(grid=100))
    assert ls.arcs == []


def test_two_circles_cover_both_unit_circles(two_circles):
    fam, ls = two_circles
    pts = np.concatenate([a.points for a in ls.arcs])
    on = np.minimum(np.abs(np.abs(pts - 1) - 1), np.abs(np.abs(pts + 1) - 1))
    assert on.max() < 1e-9
    t = np.linspace(0, 2 * np.pi, 97)
    for c in (1, -1):
        d, _ = ls.distance(c + np.exp(1j * t))
        assert d.max() < 2 * ls.cell


def test_arc_sample_invariants(two_circles, h2k1_limit):
    for fam, ls in (two_circles, h2k1_limit):
        for arc in ls.arcs:
            r, s = fam.index(arc.pair[0]), fam.index(arc.pair[1])
            L = fam.log_abs_f(arc.points)
            assert np.all(np.abs(L[r] - L[s]) <= 1e-9 * np.maximum(1, np.abs(L[r])))
            others = [t for t in range(fam.size) if t not in (r, s)]
            if others:
                assert np.all(L[others].max(axis=0) <= L[r] + math.log1p(-1e-6))
            assert np.all(arc.rho > 0)
            assert np.all(np.diff(arc.theta) > 0)
            assert np.all(np.diff(arc.arclength) >= 0)


def test_lemniscate_arcs_at_small_a():
    ls = trace_limit_set(presets.circle_and_oval(0.5))
    assert len(ls.arcs) == 3
    ends = np.array([z for a in ls.arcs for z in (a.points[0], a.points[-1])])
    target = np.array([1j, -1j]) * math.sqrt(0.75)
    assert np.min(np.abs(ends[:, None] - target[None, :]), axis=1).max() < 2 * ls.cell


def test_circle_and_quartic_at_large_a():
    ls = trace_limit_set(presets.circle_and_oval(1.5))
    assert len(ls.arcs) == 2 and all(a.closed for a in ls.arcs)
    circle = [a for a in ls.arcs if a.pair == ("f1", "f2")][0]
    assert np.abs(np.abs(circle.points + 1.5) - 1).max() < 1e-9
    quartic = [a for a in ls.arcs if a.pair == ("f1", "f3")][0]
    assert quartic.points.real.min() > 0
    assert np.abs(np.abs((quartic.points - 1.5) * (quartic.points + 1.5)) - 1).max() < 1e-9


def test_isolated_limits():
    fam = family_from_subsets(family_of(presets.h2k1()))
    (p,) = isolated_limits(fam)
    assert abs(p.z - 5) < 1e-12 and p.label == "{1,2}"
    # |f_12(5)| = 3 against |f_1(5)| = 3/2 and |f_2(5)| = 2
    assert abs(p.margin - 1 / 3) < 1e-12
    (q,) = isolated_limits(presets.tworings())
    assert abs(q.z - 0.5) < 1e-12 and q.label == "w0"
    assert isolated_limits(presets.two_circles()) == []


def test_analytic_circles_h2k1():
    fam = family_from_subsets(family_of(presets.h2k1()))
    got = {d.pair: d for d in analytic_circles(fam)}
    assert got[("{1}", "{1,2}")].kind == "circle"
    expected = {("{1}", "{1,2}"): (-1, 3), ("{2}", "{1,2}"): (2, 2), ("{1}", "{2}"): (4.4, 3.6)}
    for pair, (c, r) in expected.items():
        d = got[pair]
        assert d.kind == "circle" and abs(d.center - c) < 1e-12 and abs(d.radius - r) < 1e-12


def test_traced_arcs_lie_on_analytic_circles(h2k1_limit):
    fam, ls = h2k1_limit
    desc = {d.pair: d for d in analytic_circles(fam)}
    assert ls.arcs
    for arc in ls.arcs:
        d = desc.get(arc.pair) or desc[arc.pair[::-1]]
        assert d.distance(arc.points).max() < 1e-8


def test_equal_beta_gives_line():
    fam = family_from_subsets(family_of(presets.h2k1(beta=(2, 2))))
    d = {x.pair: x for x in analytic_circles(fam)}[("{1}", "{2}")]
    assert d.kind == "line"
    assert d.distance(np.array([0.5 + 7j])).max() < 1e-12


def test_h2k2_quartic_descriptor():
    fam = family_from_subsets(family_of(presets.h2k2()))
    d = {x.pair: x for x in analytic_circles(fam)}[("{}", "{1,2}")]
    assert d.kind == "quartic"
    z = np.array([0.5j, -0.5j])
    # |(z - a1)(z - a2)| = |b1 b2| passes through +-0.5i
    assert np.abs(d.residual(z)).max() < 1e-12


def test_degenerate_pairs_are_reported():
    fam = AnalyticFamily.build([(1, 1), (1, 1), (-1, 1)], [("a", [1], (1, 0, 0)), ("b", [1], (0, 1, 0)), ("c", [1], (0, 0, 1))])
    d = {x.pair: x.kind for x in analytic_circles(fam)}
    assert d[("a", "b")] == "degenerate"
    ls = trace_limit_set(fam, TraceConfig(grid=100))
    assert ("a", "b") in ls.degenerate_pairs


def test_tie_symmetry():
    fam = presets.circle_and_oval(0.5)
    flipped = AnalyticFamily(fam.members[::-1], fam.factors)
    a = trace_limit_set(fam, TraceConfig(grid=300))
    b = trace_limit_set(flipped, TraceConfig(grid=300))
    for arc in a.arcs:
        other = b.arcs_for(*arc.pair)
        assert len(other) == 1
        assert np.abs(np.sort_complex(other[0].points) - np.sort_complex(arc.points)).max() < 1e-12


def test_maximum_principle_side_rule(two_circles):
    fam, ls = two_circles
    for arc in ls.arcs:
        r, s = fam.index(arc.pair[0]), fam.index(arc.pair[1])
        k = np.arange(5, arc.points.size - 5, 37)
        tangent = arc.points[k + 1] - arc.points[k - 1]
        normal = 1j * tangent / np.abs(tangent)
        plus = fam.log_abs_f(arc.points[k] + 1e-3 * normal)
        minus = fam.log_abs_f(arc.points[k] - 1e-3 * normal)
        assert np.all(np.sign(plus[r] - plus[s]) == -np.sign(minus[r] - minus[s]))


def test_scaling_invariance():
    fam = presets.circle_and_oval(0.5)
    a = trace_limit_set(fam, TraceConfig(grid=200))
    b = trace_limit_set(fam.scaled(-3 + 2j), TraceConfig(grid=200))
    assert len(a.arcs) == len(b.arcs)
    for x, y in zip(a.arcs, b.arcs):
        assert np.array_equal(x.points, y.points) and np.array_equal(x.rho, y.rho)
    tw = presets.tworings()
    p, q = isolated_limits(tw), isolated_limits(tw.scaled(7))
    assert [x.label for x in p] == [x.label for x in q]
    assert max(abs(x.z - y.z) for x, y in zip(p, q)) < 1e-12


def test_lemniscate_densities():
    ls = trace_limit_set(presets.lemniscate())
    assert len(ls.arcs) == 2
    for arc in ls.arcs:
        assert abs(arc.theta_span / (2 * np.pi) - 1) < 5e-3
        inner = density_integral(arc, arc.arclength[1], arc.arclength[-2])
        assert abs(inner - theta_increment(arc, arc.arclength[1], arc.arclength[-2])) < 1e-3
        # the density vanishes at the node z = 0
        near0 = np.argmin(np.abs(arc.points))
        assert arc.rho[near0] < 0.02 < arc.rho.max()
    assert min(abs(z) for z in ls.singular_points) < 1e-12


def test_density_integral_edge_cases(two_circles):
    _, ls = two_circles
    arc = ls.arcs[0]
    assert density_integral(arc, 0.3, 0.3) == 0.0
    lo, hi = subarc_by_theta(arc, arc.points[100], np.pi / 2)
    assert abs(density_integral(arc, lo, hi) - 0.25) < 1e-4
    open_arc = trace_limit_set(presets.circle_and_oval(0.5)).arcs[0]
    with pytest.warns(EndpointWarning):
        density_integral(open_arc, 0.0, open_arc.length / 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        density_integral(open_arc, 0.1, open_arc.length / 2)


def test_fixed_small_box_reports_touching():
    fam = presets.two_circles()
    ls = trace_limit_set(fam, TraceConfig(grid=100, box=(-1, 1, -1, 1)))
    assert ls.touches_boundary and ls.expansions == 0


def test_box_expands_until_clear(monkeypatch):
    monkeypatch.setattr(tracing, "default_box", lambda fam: (-1.0, 1.0, -1.0, 1.0))
    ls = trace_limit_set(presets.two_circles(), TraceConfig(grid=200))
    assert ls.expansions >= 1 and not ls.touches_boundary
    assert ls.bounding_box[1] > 2


def test_arc_json_fields(two_circles):
    _, ls = two_circles
    doc = ls.arcs[0].to_json()
    assert set(doc) >= {"pair", "points", "arclength", "theta", "rho"}
    assert len(doc["points"]) == len(doc["rho"])
