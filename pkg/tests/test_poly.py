import mpmath
import numpy as np
import pytest

from chanspec.errors import NonConvergence, PrecisionMismatch
from chanspec.numbers import ExactComplex
from chanspec.poly import AberthConfig, ComplexPoly, ProductPowerSum, X, aberth_roots, poly_roots, ring_seeds
from oracles import pair_distance, pair_distance_mp, power_equation_roots, roots_of_unity


def test_exact_arithmetic_and_degree():
    p = (X - 1) * (X + 1)
    assert p.degree == 2 and p.is_exact
    assert p == ComplexPoly.exact([-1, 0, 1])
    assert ComplexPoly.exact([]).is_zero()
    assert p.derivative() == ComplexPoly.exact([0, 2])
    # p(2z + 1) = 4z^2 + 4z
    assert p.compose_linear(2, 1) == ComplexPoly.exact([0, 4, 4])


def test_mixed_precision_is_rejected():
    a = ComplexPoly.exact([1, 1]).to_mp(53)
    b = ComplexPoly.exact([1, 1]).to_mp(128)
    with pytest.raises(PrecisionMismatch):
        a + b


def test_roots_of_unity_exactly():
    p = ComplexPoly.exact([-1] + [0] * 11 + [1])
    rs = poly_roots(p, AberthConfig(precision=128))
    assert sum(r.multiplicity for r in rs.roots) == 12
    with mpmath.workprec(128):
        exact = [mpmath.expjpi(mpmath.mpf(2 * k) / 12) for k in range(12)]
    assert pair_distance_mp([r.value for r in rs.roots], exact) < 1e-30


def test_small_cubic():
    rs = poly_roots(ComplexPoly.from_roots([-2, 0.5, 2]))
    assert pair_distance(rs.values(), [-2, 0.5, 2]) < 1e-12


def test_triple_root_clusters_at_128_bits():
    rs = poly_roots((X - 1) ** 3, AberthConfig(precision=128))
    assert len(rs.roots) == 1 and rs.roots[0].multiplicity == 3
    # forward error of an m-fold root is about tol^(1/m)
    assert abs(rs.roots[0].z - 1) < 1e-8


def test_zero_roots_split_off():
    rs = poly_roots(ComplexPoly.exact([0, 0, 1, 1]))
    mult = {round(r.z.real, 8): r.multiplicity for r in rs.roots}
    assert mult == {0.0: 2, -1.0: 1}


def test_constant_and_zero_polynomials():
    assert len(poly_roots(ComplexPoly.exact([3]))) == 0
    with pytest.raises(ValueError):
        poly_roots(ComplexPoly.exact([]))


def test_product_power_sum_root_count_and_closed_form():
    n, c = 20, ExactComplex.coerce(0.7)
    f = ProductPowerSum([ComplexPoly.exact([1]), ComplexPoly.exact([-c])], [[n, n], [0, 0]], [1, -1], [1, 1])
    assert f.degree == 2 * n
    rs = aberth_roots(f, f.degree, ring_seeds(f.degree, 0, 1.5), AberthConfig(precision=128))
    assert pair_distance_mp([r.value for r in rs.roots], power_equation_roots(n, "0.7")) < 1e-25


def test_deflate_strips_common_powers():
    f = ProductPowerSum([ComplexPoly.exact([1]), ComplexPoly.exact([2])], [[5, 3], [2, 4]], [0, 1], [1, 1])
    reduced, known = f.deflate()
    assert [(complex(a), m) for a, m in known] == [(0j, 2), (1 + 0j, 3)]
    assert reduced.degree == f.degree - 5


def test_escalation_reaches_higher_precision_for_clusters():
    rs = poly_roots((X - 1) ** 4 * (X + 2), AberthConfig(precision=53))
    assert rs.precision >= 53
    assert sum(r.multiplicity for r in rs.roots) == 5


def test_non_convergence_reports_residual():
    p = ComplexPoly.exact([1, 0, 0, 0, 0, 0, 1])
    with pytest.raises(NonConvergence) as info:
        aberth_roots(p, 6, ring_seeds(6, 0, 3), AberthConfig(max_iters=1, max_mp_iters=1, max_precision=53))
    assert info.value.worst_residual is not None and info.value.precision == 53


def test_seed_independence():
    p = ComplexPoly.exact([1, -3, 0, 2, 0, 0, 1])
    a = aberth_roots(p, 6, ring_seeds(6, 0, 2, phase=0.1), AberthConfig(precision=128)).values()
    b = aberth_roots(p, 6, ring_seeds(6, 1j, 3, phase=1.3), AberthConfig(precision=128)).values()
    assert pair_distance(a, b) < 1e-25


def test_mp_evaluation_matches_horner():
    p = ComplexPoly.exact([1, 2, 3])
    with mpmath.workprec(128):
        F, dF, mag = p.eval_mp(mpmath.mpc(2, 1))
        assert abs(F - p(mpmath.mpc(2, 1))) < 1e-30
        assert abs(dF - p.derivative()(mpmath.mpc(2, 1))) < 1e-30


def test_deflation_groups_factors_with_equal_roots():
    # two factors share alpha = 1 with different scales; every member carries (z - 1)^2 overall
    pps = ProductPowerSum(
        [ComplexPoly.exact([1]), ComplexPoly.exact([-3]), ComplexPoly.exact([2, 1])],
        [[2, 0, 1], [1, 1, 0], [0, 2, 0]],
        [ExactComplex.coerce(1), ExactComplex.coerce(1), ExactComplex.coerce(-2)],
        [ExactComplex.coerce(2), ExactComplex.coerce(3), ExactComplex.coerce(1)],
    )
    reduced, known = pps.deflate()
    assert known == [(ExactComplex.coerce(1), 2)]
    assert reduced.degree == pps.degree - 2
    with mpmath.workprec(128):
        for z in (mpmath.mpc(0.3, 0.7), mpmath.mpc(-1.1, 2)):
            assert abs(pps(z) - (z - 1) ** 2 * reduced(z)) < mpmath.mpf(2) ** -100 * abs(pps(z))
