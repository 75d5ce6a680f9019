from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qlat.local_arith import (
    LocalArithError,
    Place,
    QpIdeal,
    all_square_classes,
    delta,
    hilbert_symbol,
    is_local_square,
    legendre,
    p_star,
    quadratic_defect,
    relevant_places,
    square_class,
    val_unit,
)

rationals = st.fractions(min_value=-200, max_value=200,
                         max_denominator=60).filter(lambda x: x != 0)
odd_primes = st.sampled_from([3, 5, 7, 11, 13, 17])
places = st.sampled_from([Place.real(), Place.finite(2), Place.finite(3),
                          Place.finite(5), Place.finite(7)])


def test_place_validation():
    with pytest.raises(LocalArithError):
        Place.finite(6)
    with pytest.raises(LocalArithError):
        Place("finite")
    assert Place.finite(2).is_dyadic
    assert not Place.finite(3).is_dyadic
    assert Place.real().is_real


def test_legendre_basics():
    assert legendre(1, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(14, 7) == 0
    with pytest.raises(LocalArithError):
        legendre(1, 2)


def test_p_star_is_1_mod_4():
    for p in (3, 5, 7, 11, 13):
        assert p_star(p) % 4 == 1
        assert abs(p_star(p)) == p


def test_delta():
    assert delta(2) == 5
    assert delta(3) == 2
    assert delta(5) == 2
    assert delta(7) == 3
    assert legendre(delta(11), 11) == -1


def test_val_unit():
    assert val_unit(12, 2) == (2, Fraction(3))
    assert val_unit(Fraction(5, 9), 3) == (-2, Fraction(5))
    with pytest.raises(LocalArithError):
        val_unit(0, 3)


@given(rationals, odd_primes)
def test_val_unit_roundtrip(a, p):
    v, u = val_unit(a, p)
    assert Fraction(p) ** v * u == a
    assert u.numerator % p != 0 and u.denominator % p != 0


def test_square_class_counts():
    assert len(all_square_classes(Place.real())) == 2
    assert len(all_square_classes(Place.finite(3))) == 4
    assert len(all_square_classes(Place.finite(2))) == 8


@given(rationals, rationals, places)
def test_square_class_multiplicative(a, b, v):
    assert square_class(a, v) * square_class(b, v) == square_class(a * b, v)


@given(rationals, places)
def test_square_times_itself_trivial(a, v):
    assert (square_class(a, v) * square_class(a, v)).is_identity
    assert is_local_square(a * a, v)


@given(places)
def test_representative_is_in_its_class(v):
    for c in all_square_classes(v):
        assert square_class(c.representative(), v) == c


def test_local_squares():
    v2 = Place.finite(2)
    assert is_local_square(17, v2)  # 1 mod 8
    assert not is_local_square(5, v2)
    assert not is_local_square(2, v2)
    assert is_local_square(Fraction(1, 4), v2)
    assert is_local_square(-1, Place.finite(5))
    assert not is_local_square(-1, Place.finite(3))
    assert not is_local_square(-4, Place.real())


def test_hilbert_symbol_known_values():
    v2 = Place.finite(2)
    assert hilbert_symbol(-1, -1, v2) == -1
    assert hilbert_symbol(-1, -1, Place.real()) == -1
    assert hilbert_symbol(-1, -1, Place.finite(5)) == 1
    assert hilbert_symbol(2, 3, Place.finite(3)) == -1
    assert hilbert_symbol(5, 2, v2) == -1
    assert hilbert_symbol(delta(2), 2, v2) == -1


@given(rationals, rationals, places)
def test_hilbert_symmetric_and_square_invariant(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    assert hilbert_symbol(a * 9, b, v) == hilbert_symbol(a, b, v)


@given(rationals, rationals, rationals, places)
def test_hilbert_bimultiplicative(a, b, c, v):
    assert hilbert_symbol(a * b, c, v) == \
        hilbert_symbol(a, c, v) * hilbert_symbol(b, c, v)


@given(rationals, places)
def test_hilbert_a_minus_a(a, v):
    # z^2 = a x^2 - a y^2 always has the solution x = y, z = 0
    assert hilbert_symbol(a, -a, v) == 1


@given(rationals, rationals)
def test_hilbert_product_formula(a, b):
    prod = 1
    for v in relevant_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


def test_quadratic_defect():
    assert quadratic_defect(1, 2).is_zero
    assert quadratic_defect(17, 2).is_zero
    assert quadratic_defect(5, 2) == QpIdeal(2, 2)
    assert quadratic_defect(3, 2) == QpIdeal(2, 1)
    assert quadratic_defect(7, 2) == QpIdeal(2, 1)
    assert quadratic_defect(2, 2) == QpIdeal(2, 1)
    assert quadratic_defect(20, 2) == QpIdeal(2, 4)
    assert quadratic_defect(4, 3).is_zero
    assert quadratic_defect(delta(3), 3) == QpIdeal(3, 0)
    assert quadratic_defect(3, 3) == QpIdeal(3, 1)


@given(rationals, st.sampled_from([2, 3, 5, 7]))
def test_defect_zero_iff_square(a, p):
    assert quadratic_defect(a, p).is_zero == \
        is_local_square(a, Place.finite(p))


def test_delta_has_maximal_defect():
    # the canonical nonsquare unit at 2 has defect exactly 4*Z_2
    assert quadratic_defect(delta(2), 2) == QpIdeal(2, 2)


def test_relevant_places():
    ps = relevant_places(Fraction(15, 7))
    assert Place.real() in ps
    assert {v.p for v in ps if not v.is_real} == {2, 3, 5, 7}
