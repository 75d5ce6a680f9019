import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qlat.local_arith import delta
from qlat.nondyadic_lattice import (
    JordanLatticeND,
    LatticeError,
    diagonal_model,
    format_jordan,
    gram_of,
    is_k_universal,
    is_k_universal_via_testing,
    jordan_from_gram,
    maximal_binary_anisotropic,
    parse_jordan,
    space_of,
)
from qlat.nondyadic_lattice import testing_failures as nd_testing_failures
from qlat.nondyadic_lattice import testing_set as nd_testing_set
from qlat.quad_space import hyperbolic_plane, is_isotropic
from qlat.rep_oracle import OracleConfig, maximality_scan, represents_lattice


def dmat(entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def test_jordan_validation():
    with pytest.raises(LatticeError):
        JordanLatticeND(2, ((0, 1, 0),))
    with pytest.raises(LatticeError):
        JordanLatticeND(3, ())
    with pytest.raises(LatticeError):
        JordanLatticeND(3, ((1, 1, 0), (0, 1, 0)))  # scales must increase
    with pytest.raises(LatticeError):
        JordanLatticeND(3, ((0, 1, 2),))


def test_jordan_from_gram_examples():
    assert jordan_from_gram(dmat([1, -1, -3]), 3).blocks == \
        ((0, 2, 1), (1, 1, 1))  # -1 is in the class of Delta at 3
    assert jordan_from_gram(dmat([1]), 7).blocks == ((0, 1, 0),)
    assert jordan_from_gram([[0, 1], [1, 0]], 5).blocks == ((0, 2, 0),)


def test_jordan_from_gram_negative_scales():
    from fractions import Fraction
    L = jordan_from_gram(dmat([Fraction(1, 3), 3]), 3)
    assert L.blocks == ((-1, 1, 0), (1, 1, 0))


@given(st.sampled_from([3, 5]),
       st.lists(st.sampled_from([1, 2, 3, 6, -1, -2, -3, -6, 9, 18]),
                min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_jordan_space_consistency(p, entries):
    # the Jordan normalization preserves the ambient quadratic space
    from qlat.quad_space import inv_of_diagonal
    from qlat.local_arith import Place
    L = jordan_from_gram(dmat(entries), p)
    assert space_of(L) == inv_of_diagonal(entries, Place.finite(p))
    assert L.rank == len(entries)


def test_jordan_invariance_under_basis_change():
    # congruent Gram matrices (unimodular change of basis) agree
    G = [[2, 1, 0], [1, 3, 1], [0, 1, 15]]
    # apply x1 -> x1 + x3
    H = [[G[0][0] + 2 * G[0][2] + G[2][2], G[0][1] + G[1][2], G[0][2] + G[2][2]],
         [G[0][1] + G[1][2], G[1][1], G[1][2]],
         [G[0][2] + G[2][2], G[1][2], G[2][2]]]
    assert jordan_from_gram(G, 3) == jordan_from_gram(H, 3)


def test_testing_set_shapes():
    for p in (3, 5):
        assert len(nd_testing_set(p, 1)) == 4
        assert len(nd_testing_set(p, 2)) == 7
        for k in (3, 4, 6):
            ts = nd_testing_set(p, k)
            assert len(ts) == 8
            assert all(t.rank == k for t in ts)
    with pytest.raises(LatticeError):
        nd_testing_set(3, 0)


def test_testing_set_k1_square_classes():
    # the four rank-1 members hit the four square classes
    for p in (3, 5):
        reps = {diagonal_model(t)[0] for t in nd_testing_set(p, 1)}
        assert reps == {1, delta(p), p, delta(p) * p}


def test_criterion_examples():
    assert is_k_universal(JordanLatticeND(3, ((0, 5, 0),)), 2)
    assert is_k_universal(JordanLatticeND(3, ((0, 3, 0), (1, 2, 0))), 2)
    assert not is_k_universal(JordanLatticeND(3, ((0, 3, 0), (2, 2, 0))), 2)
    assert not is_k_universal(JordanLatticeND(3, ((0, 4, 1),)), 2)
    assert is_k_universal(JordanLatticeND(3, ((0, 4, 1), (1, 1, 0))), 2)
    assert is_k_universal(JordanLatticeND(3, ((0, 4, 0),)), 2)
    assert not is_k_universal(JordanLatticeND(3, ((1, 6, 0),)), 2)
    assert is_k_universal(JordanLatticeND(5, ((0, 4, 0), (1, 2, 1))), 3)
    assert is_k_universal(JordanLatticeND(5, ((0, 5, 1), (1, 1, 1))), 3)
    assert not is_k_universal(JordanLatticeND(5, ((0, 5, 1), (2, 1, 1))), 3)
    assert is_k_universal(JordanLatticeND(5, ((0, 6, 1),)), 3)
    with pytest.raises(LatticeError):
        is_k_universal(JordanLatticeND(3, ((0, 4, 0),)), 1)


def test_k_universal_implies_lower_k():
    for p in (3, 5):
        for blocks in itertools.product(range(2, 8), (0, 1), range(0, 3), (0, 1)):
            r1, d1, r2, d2 = blocks
            L = JordanLatticeND(p, ((0, r1, d1),) if r2 == 0
                                else ((0, r1, d1), (1, r2, d2)))
            for k in (3, 4):
                if is_k_universal(L, k):
                    assert is_k_universal(L, k - 1)


def test_oracle_path_k1_witnesses():
    p, D = 3, delta(3)
    cases = [
        ([D, -p, D * p], [1]),
        ([1, p, -D * p], [D]),
        ([-1, D, D * p], [p]),
        ([1, -D, p], [D * p]),
    ]
    for entries, failing in cases:
        L = jordan_from_gram(dmat(entries), p)
        fails = nd_testing_failures(L, 1)
        assert [diagonal_model(t) for t in fails] == [failing]


def test_oracle_agrees_with_criterion_spot():
    for blocks, k, want in [
        (((0, 5, 0),), 2, True),
        (((0, 3, 1), (1, 2, 0)), 2, True),
        (((0, 4, 1),), 2, False),
        (((0, 2, 0), (1, 3, 0)), 2, False),
    ]:
        L = JordanLatticeND(3, blocks)
        assert is_k_universal_via_testing(L, k) == want
        assert is_k_universal(L, k) == want


def test_maximal_binary():
    for p in (3, 5):
        L = maximal_binary_anisotropic(p)
        assert L.blocks == ((1, 2, jordan_from_gram(
            dmat([p, -delta(p) * p]), p).blocks[0][2]),)
        V = space_of(L)
        assert not is_isotropic(V)
        assert maximality_scan(gram_of(L), p)


def test_unimodular_classification_by_rank_and_det():
    # unimodular lattices of equal rank represent each other iff same det class
    for p in (3, 5):
        cfg = OracleConfig(p)
        for r in (1, 2, 3):
            for d1 in (0, 1):
                for d2 in (0, 1):
                    A = gram_of(JordanLatticeND(p, ((0, r, d1),)))
                    B = gram_of(JordanLatticeND(p, ((0, r, d2),)))
                    both = (represents_lattice(A, B, cfg).verdict == "yes"
                            and represents_lattice(B, A, cfg).verdict == "yes")
                    assert both == (d1 == d2)


def test_descriptor_roundtrip():
    for text in ("0:3:1,1:2:D", "0:1:D", "-1:2:1,0:1:1,2:4:D"):
        L = parse_jordan(text, 5)
        assert format_jordan(L) == text
    with pytest.raises(LatticeError):
        parse_jordan("0:3:2", 5)
    with pytest.raises(LatticeError):
        parse_jordan("nope", 5)
