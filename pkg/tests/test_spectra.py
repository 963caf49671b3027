import math

import numpy as np
import pytest

from chanspec import presets
from chanspec.graph import ChannelSpec, GraphSpec, assemble
from chanspec.limitset import subarc_by_theta, trace_limit_set
from chanspec.spectra import (
    NotAnEigenvalue,
    SpectrumConfig,
    eigenvalues,
    eigenvector,
    localization_report,
    resolvent_grid,
    resolvent_norm,
    ring_gap,
    sector_statistics,
    spectrum_of_family,
    tube_count,
)
from oracles import pair_distance, roots_of_unity

GRAPH_PRESETS = ["h2k1", "h3k1", "h2k2", "h2k2-weak", "three", "cycle", "chords3"]


@pytest.fixture(scope="module")
def h2k1_30():
    return eigenvalues(presets.h2k1(), 30)


@pytest.mark.parametrize("name", GRAPH_PRESETS)
@pytest.mark.parametrize("n", [1, 4, 12])
def test_count_and_trace(name, n):
    spec = presets.get_preset(name).graph()
    res = eigenvalues(spec, n)
    assert res.count() == spec.dimension(n)
    total = np.sum(res.values())
    trace = assemble(spec, n).trace().to_complex()
    assert abs(total - trace) <= 1e-8 * max(1.0, np.sum(np.abs(res.values())))


def test_cycle_gives_roots_of_unity():
    res = eigenvalues(presets.cycle(), 10)
    assert pair_distance(res.values(), roots_of_unity(12)) < 1e-12


def test_h2k1_isolated_eigenvalue(h2k1_30):
    iso = h2k1_30.of_kind("isolated")
    assert iso.size == 1 and abs(iso[0] - 5.0000104) < 1e-4
    assert h2k1_30.max_arc_distance() < 0.2


def test_dense_solver_agrees_loosely(h2k1_30):
    dense = np.linalg.eigvals(assemble(presets.h2k1(), 30).dense())
    assert pair_distance(h2k1_30.values(), dense) < 1e-8


def test_h2k2_eigenvalues_follow_the_quartic():
    res = eigenvalues(presets.h2k2(), 30)
    z = np.array([r.z for r, c in zip(res.roots.roots, res.classes) if c.kind != "isolated"])
    assert z.size == 60
    # distance to |(z - a1)(z - a2)| = b1 b2 measured against the traced curve
    assert res.max_arc_distance() < 0.2
    q = np.abs((z + 1.2) * (z - 1.2))
    assert np.abs(q - 1.69).max() < 0.5


def test_convergence_in_n_is_monotone():
    for name in ("h2k1", "h2k2", "three"):
        spec = presets.get_preset(name).graph()
        d = [eigenvalues(spec, n).max_arc_distance() for n in (10, 20, 40)]
        assert d[0] >= d[1] >= d[2], (name, d)


@pytest.mark.parametrize("name", ["h2k1", "h3k1", "three"])
def test_seed_independence(name):
    spec = presets.get_preset(name).graph()
    a = eigenvalues(spec, 12, SpectrumConfig(seed=0)).values()
    b = eigenvalues(spec, 12, SpectrumConfig(seed=7)).values()
    c = eigenvalues(spec, 12, SpectrumConfig(seeding="ring", seed=3)).values()
    assert pair_distance(a, b) < 1e-9 and pair_distance(a, c) < 1e-9


def test_tworings_statistics():
    res = spectrum_of_family(presets.tworings(), 40)
    assert res.count() == 80
    quads = sector_statistics(res, 0.2, [(k * math.pi / 2, (k + 1) * math.pi / 2) for k in range(4)])
    assert all(abs(q.fraction_of_annulus - 0.25) <= 0.05 for q in quads)
    assert np.sum(np.abs(res.values() - 0.5) < 0.05) == 1
    (whole,) = sector_statistics(res, 0.2, [(0, 2 * math.pi)])
    assert whole.count == 79 and abs(whole.fraction_of_all - 79 / 80) < 1e-12


def test_sector_statistics_empty():
    with pytest.raises(ValueError):
        sector_statistics([], 0.1, [(0, 1)])


def test_interlocking_ring_gap():
    res = spectrum_of_family(presets.interlock(), 20)
    gaps = [ring_gap(res, t, 20) for t in (0, math.pi / 2, math.pi)]
    assert abs(gaps[0] - (5 ** (1 / 20) - 1)) < 0.01
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.01


def test_tube_count_and_edge_cases():
    fam = presets.two_circles()
    ls = trace_limit_set(fam)
    arc = [a for a in ls.arcs if np.abs(np.abs(a.points - 1) - 1).max() < 1e-6][0]
    lo, hi = subarc_by_theta(arc, 2.0, math.pi / 2)
    res = spectrum_of_family(fam, 60, limit_set=ls)
    assert abs(tube_count(res, arc, lo, hi, 0.1) - 15) <= 3
    assert tube_count(res, arc, lo, lo, 0.1) == 0
    with pytest.raises(ValueError):
        tube_count(res, arc, lo, hi, 1e-6)


def test_eigenvector_on_cycle_has_uniform_modulus():
    pair = eigenvector(presets.cycle(), 10, 1)
    v = pair.abs_vector()
    assert np.ptp(v) < 1e-12 and abs(np.linalg.norm(v) - 1) < 1e-12


def test_eigenvector_rejects_non_eigenvalue():
    with pytest.raises(NotAnEigenvalue):
        eigenvector(presets.h2k1(), 10, 0.123 + 0.456j)


def test_localization_at_isolated_eigenvalue(h2k1_30):
    lam = [r.value for r, c in zip(h2k1_30.roots.roots, h2k1_30.classes) if c.kind == "isolated"][0]
    pair = eigenvector(presets.h2k1(), 30, lam, bits=128)
    rep = localization_report(presets.h2k1(), 30, pair)
    assert [ch.direction for ch in rep.channels] == ["decaying-backward"] * 2
    assert all(ch.recurrence_residual <= 1e-8 for ch in rep.channels)
    assert rep.mass_ok and rep.dichotomy_ok
    assert all(a >= b for a, b in zip(rep.junction_mass, rep.junction_mass[1:]))


def test_zero_channel_is_flagged():
    # two identical loops and a third one; lambda = 0 lives on the first two only
    spec = GraphSpec.build(
        ["J"], {("J", "J"): 1}, [ChannelSpec("J", "J", 1, 0, 1), ChannelSpec("J", "J", 1, 0, 1), ChannelSpec("J", "J", 1, 2, 1)]
    )
    rep = localization_report(spec, 3, eigenvector(spec, 3, 0))
    assert rep.channels[2].direction == "zero" and rep.channels[2].certificate == "zero"


def test_resolvent_matches_svd_and_far_field_bound():
    spec = presets.h2k2()
    a = assemble(spec, 10).dense()
    for z in (0.3 + 0.7j, 2.5 - 0.2j):
        exact = 1 / np.linalg.svd(z * np.eye(a.shape[0]) - a, compute_uv=False).min()
        assert abs(resolvent_norm(a, z) - exact) < 1e-6 * exact
    far = 10 + np.linalg.norm(a, 2)
    assert resolvent_norm(a, far) <= 1 / (far - np.linalg.norm(a, 2)) * (1 + 1e-9)


def test_resolvent_grid_skips_eigenvalues():
    grid = resolvent_grid(presets.cycle(), 10, [1.0, 3.0], [0.0])
    assert grid.skipped == [(1.0, 0.0)]
    assert np.isnan(grid.log10_norm[0, 0]) and np.isfinite(grid.log10_norm[0, 1])
