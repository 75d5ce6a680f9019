import pytest
from hypothesis import given, settings, strategies as st

from qlat.quad_field import (
    FieldError,
    admits_2_lng,
    admits_classic_1_lng,
    atlas,
    class_number_even,
    no_classic_ternary_lng_table,
    profile,
    splits_completely_at_dyadic,
    squarefree_kernel,
    unramified_quadratic_extensions,
)

squarefree_m = st.integers(-300, 300).filter(
    lambda m: m not in (0, 1) and squarefree_kernel(m) == m)


def test_squarefree_kernel():
    assert squarefree_kernel(12) == 3
    assert squarefree_kernel(-900) == -1
    assert squarefree_kernel(30) == 30
    with pytest.raises(FieldError):
        squarefree_kernel(0)


def test_profile_examples():
    P = profile(-14)
    assert (P.d_F, P.odd_ramified, P.p_stars) == (-56, (7,), (-7,))
    assert P.dyadic_behavior == "ramified" and not P.is_real
    assert profile(-5).d_F == -20
    assert profile(-1).odd_ramified == ()
    assert profile(-7).dyadic_behavior == "split"
    assert profile(5).dyadic_behavior == "inert"
    assert profile(65).dyadic_behavior == "split"
    with pytest.raises(FieldError):
        profile(12)
    with pytest.raises(FieldError):
        profile(1)


@given(squarefree_m)
def test_profile_invariants(m):
    P = profile(m)
    assert P.d_F == (m if m % 4 == 1 else 4 * m)
    assert all(s % 4 == 1 for s in P.p_stars)
    assert all(P.d_F % p == 0 for p in P.odd_ramified)


def test_extension_examples():
    assert unramified_quadratic_extensions(profile(-14)) == [-7]
    assert unramified_quadratic_extensions(profile(-7)) == []
    assert unramified_quadratic_extensions(profile(15)) == [5]
    assert unramified_quadratic_extensions(profile(-5)) == [5]
    assert unramified_quadratic_extensions(profile(-1)) == []
    assert unramified_quadratic_extensions(profile(2)) == []


@given(squarefree_m)
def test_extension_classes_nontrivial(m):
    P = profile(m)
    dk = squarefree_kernel(P.d_F)
    for c in unramified_quadratic_extensions(P):
        ck = squarefree_kernel(c)
        assert ck not in (1, dk)
        if P.is_real:
            assert c > 0
        # the partner class c*d_F reduces to the same extension
        partner = squarefree_kernel(c * P.d_F)
        assert partner not in (1,)


def test_class_number_parity_fixtures():
    # parities independently known from reduced-form / continued-fraction
    # computations for these discriminants
    fixture = {-1: False, -2: False, -5: True, -7: False, -14: True,
               2: False, 3: False, 5: False, 10: True, 15: True, 65: True}
    for m, even in fixture.items():
        assert class_number_even(profile(m)) == even, m


def test_2_lng():
    assert admits_2_lng(profile(-5))
    assert admits_2_lng(profile(-14))
    assert not admits_2_lng(profile(2))
    assert not admits_2_lng(profile(-1))


def test_dyadic_splitting():
    assert splits_completely_at_dyadic(-7, profile(-14))
    assert not splits_completely_at_dyadic(5, profile(-5))
    assert not splits_completely_at_dyadic(5, profile(65))
    with pytest.raises(FieldError):
        splits_completely_at_dyadic(3, profile(-14))


def test_classic_1_lng():
    assert admits_classic_1_lng(profile(-14))
    assert not admits_classic_1_lng(profile(-5))
    assert not admits_classic_1_lng(profile(-1))
    assert not admits_classic_1_lng(profile(2))
    assert not admits_classic_1_lng(profile(-2))


def test_table_examples():
    assert no_classic_ternary_lng_table(profile(-5))
    assert not no_classic_ternary_lng_table(profile(-14))
    assert no_classic_ternary_lng_table(profile(65))
    assert no_classic_ternary_lng_table(profile(2))
    assert no_classic_ternary_lng_table(profile(-1))
    assert no_classic_ternary_lng_table(profile(-2))


@given(squarefree_m)
@settings(max_examples=150, deadline=None)
def test_table_matches_first_principles(m):
    P = profile(m)
    assert no_classic_ternary_lng_table(P) == (not admits_classic_1_lng(P))


@given(squarefree_m)
def test_1_lng_implies_even_class_number(m):
    P = profile(m)
    if admits_classic_1_lng(P):
        assert class_number_even(P)


def test_atlas():
    rows = atlas(30)
    assert all(r.consistent for r in rows)
    by_m = {r.m: r for r in rows}
    assert by_m[-14].lng1_first_principles and not by_m[-14].lng1_table
    assert not by_m[2].lng1_first_principles and by_m[2].lng1_table
    assert by_m[-5].h_even and by_m[-5].lng2
    # exactly the squarefree radicands appear
    assert set(by_m) == {m for m in range(-30, 31)
                         if m not in (0, 1) and squarefree_kernel(m) == m}
    with pytest.raises(FieldError):
        atlas(1)
