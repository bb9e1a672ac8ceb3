from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modperiods.cyclofield import (
    CycNum,
    LevelMismatchError,
    cyclotomic_polynomial,
    euler_phi,
    imag_unit,
    parse_cycnum,
    sqrt2,
    zeta,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
cycnums = st.lists(small, min_size=8, max_size=8).map(lambda c: CycNum(c, 24))


@settings(max_examples=1000, deadline=None)
@given(cycnums, cycnums, cycnums)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if not x.is_zero():
        assert x * x.inv() == 1


@settings(max_examples=200, deadline=None)
@given(cycnums)
def test_text_round_trip(x):
    assert parse_cycnum(str(x)) == x


@settings(max_examples=200, deadline=None)
@given(cycnums, cycnums)
def test_embedding_is_a_ring_map(x, y):
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9 * (1 + abs(x.to_complex() * y.to_complex()))


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(24) == (1, 0, 0, 0, -1, 0, 0, 0, 1)
    assert euler_phi(24) == 8 and euler_phi(7) == 6


def test_special_elements():
    assert sqrt2() ** 2 == 2
    assert imag_unit() ** 2 == -1
    assert zeta(1, 3) == zeta(8, 24)
    assert zeta(1, 8) + zeta(7, 8) == sqrt2()
    assert str(zeta(1, 6)) == "[N=24] z^4"
    assert str(sqrt2()) == "[N=24] -z^5 + z^3 + z"


def test_printing_example():
    x = CycNum([-2, 0, 0, Fraction(1, 2)], 24)
    assert str(x) == "[N=24] 1/2*z^3 - 2"
    assert parse_cycnum("[N=24] 1/2*z^3 - 2") == x


def test_promotion_across_levels():
    a = zeta(1, 4, level=4)
    b = zeta(1, 3, level=3)
    s = a + b
    assert s.level == 12
    assert abs(s.to_complex() - (1j + complex(-0.5, 3 ** 0.5 / 2))) < 1e-12


def test_parse_level_mismatch():
    with pytest.raises(LevelMismatchError):
        parse_cycnum("[N=24] z", level=12)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CycNum([0], 24).inv()


def test_roots_of_unity():
    for k in range(24):
        assert zeta(k, 24).root_of_unity_index() == k
    assert sqrt2().root_of_unity_index() is None
    assert zeta(5, 24).conjugate() == zeta(19, 24)
