"""Global layer over quadratic fields Q(sqrt(m)): discriminant and
ramification data, quadratic unramified extensions via genus theory,
class-number parity, existence of 2-LNG lattices (locally 2-universal but
not 2-universal), and existence of classic 1-LNG lattices, the latter
decided both from first principles (extension classes + dyadic splitting)
and by a congruence table; the two must always agree.

A note on scope: the congruence table decides "no classic ternary 1-LNG
lattice", while the first-principles path decides "no classic 1-LNG
lattice of any rank"; over quadratic fields the two verdicts coincide and
the atlas consistency sweep is the computational evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .local_arith import Place, is_local_square, p_star


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class QuadFieldProfile:
    m: int
    d_F: int
    is_real: bool
    odd_ramified: tuple[int, ...]
    p_stars: tuple[int, ...]
    dyadic_behavior: str  # "split" | "inert" | "ramified"

    def __repr__(self):
        return (f"Q(sqrt({self.m})): d_F={self.d_F}, "
                f"2 {self.dyadic_behavior}, odd ramified {list(self.odd_ramified)}")


def squarefree_kernel(n: int) -> int:
    """Sign times the product of primes dividing n to an odd power."""
    if n == 0:
        raise FieldError("0 has no squarefree kernel")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def profile(m: int) -> QuadFieldProfile:
    if m in (0, 1):
        raise FieldError(f"degenerate radicand {m}")
    if squarefree_kernel(m) != m:
        raise FieldError(f"radicand must be squarefree, got {m}")
    d = m if m % 4 == 1 else 4 * m
    odd = tuple(sorted(p for p in factorint(abs(d)) if p != 2))
    stars = tuple(p_star(p) for p in odd)
    if d % 4 == 0:
        behavior = "ramified"
    elif d % 8 == 1:
        behavior = "split"
    else:
        behavior = "inert"
    return QuadFieldProfile(m, d, m > 0, odd, stars, behavior)


def unramified_quadratic_extensions(P: QuadFieldProfile) -> list[int]:
    """Square classes c of Q such that F(sqrt(c)) is a quadratic extension
    of F = Q(sqrt(m)) unramified at every finite and infinite place.

    Candidates are the nonempty subset products of the p_i^*; a candidate
    is trivial when it is a rational square or lands in the class of d_F
    (then F(sqrt(c)) = F); two candidates give the same extension when
    they differ by the class of d_F; for real F the extension must be
    totally real, so only positive classes survive.  Representatives are
    canonical: smallest absolute value among the subset products in the
    class, positive preferred on ties.
    """
    dk = squarefree_kernel(P.d_F)
    prods = [1]
    for s in P.p_stars:
        prods += [q * s for q in prods]
    groups: dict[frozenset, list[int]] = {}
    for c in prods[1:]:
        ck = squarefree_kernel(c)
        if ck == 1 or ck == dk:
            continue
        if P.is_real and c < 0:
            continue
        groups.setdefault(frozenset((ck, squarefree_kernel(c * P.d_F))),
                          []).append(c)
    reps = [min(cs, key=lambda c: (abs(c), c < 0)) for cs in groups.values()]
    return sorted(reps, key=lambda c: (abs(c), c < 0))


def class_number_even(P: QuadFieldProfile) -> bool:
    """Parity of the class number: even iff the genus field exceeds F,
    i.e. some quadratic unramified extension exists."""
    return bool(unramified_quadratic_extensions(P))


def admits_2_lng(P: QuadFieldProfile) -> bool:
    """Whether a 2-LNG lattice (locally 2-universal everywhere, globally
    not 2-universal) exists over O_F: equivalent to even class number.
    When true, every such lattice lies in the genus of
    2^{-1}A(0,0) + 2^{-1}A(0,0)."""
    return class_number_even(P)


def splits_completely_at_dyadic(c: int, P: QuadFieldProfile) -> bool:
    """Whether every dyadic prime of F splits completely in F(sqrt(c)).

    Decided over Q_2: c must be a square in the dyadic completion, which
    is Q_2 (split), Q_2(sqrt(5)) (inert) or Q_2(sqrt(m)) (ramified); a
    rational is a square in Q_2(sqrt(b)) iff it or its product with b is
    a square in Q_2.
    """
    if c not in unramified_quadratic_extensions(P):
        raise FieldError(f"{c} is not an unramified extension class of {P}")
    v2 = Place.finite(2)
    if is_local_square(c, v2):
        return True
    if P.dyadic_behavior == "split":
        return False
    b = 5 if P.dyadic_behavior == "inert" else P.m
    return is_local_square(Fraction(c) * b, v2)


def admits_classic_1_lng(P: QuadFieldProfile) -> bool:
    """Whether a classic 1-LNG lattice exists over O_F: F must have a
    quadratic unramified extension in which every dyadic prime splits
    completely."""
    return any(splits_completely_at_dyadic(c, P)
               for c in unramified_quadratic_extensions(P))


def no_classic_ternary_lng_table(P: QuadFieldProfile) -> bool:
    """Congruence-table membership: true iff F is one of the fields with
    no classic ternary 1-LNG lattice.  Must equal
    NOT admits_classic_1_lng(P) for every quadratic field."""
    m, ps = P.m, P.odd_ramified
    t = len(ps)
    r8 = sorted(p % 8 for p in ps)
    if m > 0:
        if m % 4 == 1:
            if t == 1 and m == ps[0]:
                return True
            if t == 2 and m == ps[0] * ps[1]:
                if all(p % 4 == 3 for p in ps) or all(p % 8 == 5 for p in ps):
                    return True
            return t == 3 and m == ps[0] * ps[1] * ps[2] and r8 == [3, 5, 7]
        if m == 2:
            return True
        if t == 1 and m == ps[0]:
            return ps[0] % 4 == 3
        if t == 1 and m == 2 * ps[0]:
            return ps[0] % 8 in (3, 5, 7)
        if t == 2:
            mixed = any(p % 8 == 5 for p in ps) and any(p % 4 == 3 for p in ps)
            if m == ps[0] * ps[1]:
                return mixed
            if m == 2 * ps[0] * ps[1]:
                return mixed or r8 == [3, 7]
        return False
    if m % 4 == 1:
        if t == 1 and m == -ps[0]:
            return True
        return t == 2 and m == -ps[0] * ps[1] and r8 == [3, 5]
    if m in (-1, -2):
        return True
    if t == 1 and m == -ps[0]:
        return ps[0] % 8 == 5
    if t == 1 and m == -2 * ps[0]:
        return ps[0] % 8 in (3, 5)
    return False


@dataclass(frozen=True)
class AtlasRow:
    m: int
    d_F: int
    is_real: bool
    odd_ramified: tuple[int, ...]
    extensions: tuple[int, ...]
    h_even: bool
    lng2: bool
    lng1_first_principles: bool
    lng1_table: bool

    @property
    def consistent(self) -> bool:
        return self.lng1_first_principles == (not self.lng1_table)


def atlas(max_abs_m: int) -> list[AtlasRow]:
    """One row per squarefree radicand m with 2 <= |m| <= max_abs_m
    (including the negative ones and m = -1), ordered by (|m|, sign)."""
    if max_abs_m < 2:
        raise FieldError("range must be >= 2")
    rows = []
    radicands = [m for a in range(1, max_abs_m + 1) for m in (a, -a)
                 if m not in (0, 1) and squarefree_kernel(m) == m]
    for m in radicands:
        P = profile(m)
        exts = tuple(unramified_quadratic_extensions(P))
        rows.append(AtlasRow(
            m=m, d_F=P.d_F, is_real=P.is_real, odd_ramified=P.odd_ramified,
            extensions=exts, h_even=bool(exts), lng2=bool(exts),
            lng1_first_principles=admits_classic_1_lng(P),
            lng1_table=no_classic_ternary_lng_table(P)))
    return rows
