from fractions import Fraction as Fr

import pytest

from chanspec import presets
from chanspec.errors import CapExceeded
from chanspec.graph import assemble, decompose
from chanspec.numbers import ExactComplex
from chanspec.pencil import (
    brute_char_poly,
    counting_bound,
    cycle_cover_support,
    family_of,
    identity_check,
    reduce,
    subset_coefficients,
    subset_label,
)
from chanspec.poly import ComplexPoly, X

GRAPH_PRESETS = [name for name, p in presets.PRESETS.items() if p.kind == "graph"]


def _labels(fam):
    return {subset_label(s): p for s, p in fam.nonzero()}


def test_h2k1_coefficients():
    # a_{12} = z - gamma, a_{1} = -beta_2, a_{2} = -beta_1
    c = _labels(family_of(presets.h2k1()))
    assert c == {
        "{1,2}": ComplexPoly.exact([-5, 1]),
        "{1}": ComplexPoly.exact([-3]),
        "{2}": ComplexPoly.exact([-2]),
    }


def test_h2k2_characteristic_polynomial():
    n = 3
    a1, a2, b = Fr(-6, 5), Fr(6, 5), Fr(13, 10)
    expected = (X + 2) * (X - 2) * (X - a1) ** n * (X - a2) ** n - ComplexPoly.exact([b ** (2 * n + 2)])
    assert family_of(presets.h2k2()).expanded(n) == expected
    assert brute_char_poly(assemble(presets.h2k2(), 2)) == family_of(presets.h2k2()).expanded(2)


def test_three_characteristic_polynomial():
    n = 2
    i2 = ExactComplex(0, Fr(1, 2))
    p1 = (X - i2) ** n
    p2 = (X + i2) ** n
    p3 = (X - Fr(3, 2)) ** n
    expected = X * (X * X - 4) * p1 * p2 * p3 - (X - 2) * p2 * p3 - 1
    assert family_of(presets.three()).expanded(n) == expected


def test_three_support():
    fam = family_of(presets.three())
    assert sorted(_labels(fam)) == ["{1,2,3}", "{2,3}", "{}"]
    assert len(fam.coefficients) == 8


@pytest.mark.parametrize("a, b, c, d", [(0, 0, 1, 0), (Fr(1, 2), 2, -1, 3), (1, 1, 1, 1)])
def test_cycle_characteristic_polynomial(a, b, c, d):
    n = 4
    spec = presets.cycle(a, b, c, d)
    quad = X * X - ComplexPoly.exact([a + d]) * X + ComplexPoly.exact([a * d - b * c])
    expected = X**n * quad - ComplexPoly.exact([c])
    assert family_of(spec).expanded(n) == expected


@pytest.mark.parametrize("h", [3, 4])
def test_chords_support_is_full(h):
    fam = family_of(presets.chords(h))
    assert len(fam.support()) == 2**h
    top = fam.coefficients[frozenset(range(h))]
    assert top == ComplexPoly.exact([-1] + [0] * (2 * h - 1) + [1])


@pytest.mark.parametrize("name", GRAPH_PRESETS)
def test_support_within_cycle_covers(name):
    spec = presets.get_preset(name).graph()
    fam = family_of(spec)
    fam.check_invariants()
    assert fam.support() <= cycle_cover_support(decompose(spec))


@pytest.mark.parametrize("name, bound, size", [("h2k1", 3, 3), ("h3k1", 4, 4), ("h2k2", 4, 2)])
def test_counting_bound(name, bound, size):
    spec = presets.get_preset(name).graph()
    dec = decompose(spec)
    assert all(len(b) == 1 for b in dec.junctions)
    assert counting_bound(dec.h, len(spec.junction_vertices)) == bound
    assert len(family_of(spec).support()) == size


@pytest.mark.parametrize("name, n", [("h2k2", 5), ("three", 3), ("h3k1", 4), ("h2k2-weak", 3), ("chords3", 2)])
def test_identity_check(name, n):
    rep = identity_check(presets.get_preset(name).graph(), n)
    assert len(rep.deviations) == 20
    assert rep.max_deviation <= 1e-30


def test_identity_check_double_precision_route():
    assert identity_check(presets.three(), 3, bits=53).max_deviation <= 1e-12


@pytest.mark.parametrize("name, n", [("h2k1", 1), ("h2k1", 3), ("h2k2", 4), ("three", 3), ("cycle", 10), ("h3k1", 3)])
def test_brute_char_poly_matches_pencil(name, n):
    spec = presets.get_preset(name).graph()
    m = assemble(spec, n)
    assert m.dimension <= 12
    assert brute_char_poly(m) == family_of(spec).expanded(n)


def test_brute_cap():
    with pytest.raises(CapExceeded):
        brute_char_poly(assemble(presets.h2k1(), 10))


def test_subset_cap():
    with pytest.raises(CapExceeded):
        subset_coefficients(reduce(decompose(presets.h3k1())), cap=2)


def test_pencil_dimension():
    p = reduce(decompose(presets.three()))
    assert p.dimension == 3 + 3
