from fractions import Fraction

import mpmath
import pytest

from chanspec.numbers import ONE, ZERO, ExactComplex


def test_float_input_is_taken_by_repr():
    assert ExactComplex.coerce(1.2) == ExactComplex(Fraction(6, 5), 0)


@pytest.mark.parametrize("value", [(1, 2), 1 + 2j, ["1", "2"], ["2/2", "4/2"]])
def test_coerce_forms(value):
    assert ExactComplex.coerce(value) == ExactComplex(1, 2)


def test_field_operations():
    a = ExactComplex(1, 2)
    b = ExactComplex(Fraction(1, 3), -1)
    assert (a * b) / b == a
    assert a - a == ZERO
    assert a**0 == ONE
    assert a * a.conjugate() == ExactComplex(a.abs2(), 0)


def test_pair_round_trip():
    for v in [ExactComplex(Fraction(1, 3), Fraction(-7, 4)), ExactComplex(Fraction(13, 10), 0)]:
        assert ExactComplex.coerce(v.to_pair()) == v
    assert ExactComplex(Fraction(13, 10), 0).to_pair()[0] == "1.3"


def test_to_mpc_uses_current_precision():
    with mpmath.workprec(200):
        x = ExactComplex(Fraction(1, 3), 0).to_mpc()
        assert abs(x * 3 - 1) < mpmath.mpf(2) ** -195
