"""Exact arithmetic of square classes, Legendre/Hilbert symbols and
quadratic defects over Q_p (including p=2) and the real place.

All rationals are handled exactly via fractions.Fraction; Hilbert symbols
are computed by closed-form valuation/residue formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime


class LocalArithError(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime or the real place."""

    kind: str  # "finite" | "real"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.p is None or self.p < 2 or not isprime(self.p):
                raise LocalArithError(f"not a prime: {self.p}")
        elif self.kind == "real":
            if self.p is not None:
                raise LocalArithError("real place carries no prime")
        else:
            raise LocalArithError(f"unknown place kind: {self.kind}")

    @staticmethod
    def finite(p: int) -> "Place":
        return Place("finite", p)

    @staticmethod
    def real() -> "Place":
        return Place("real")

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    @property
    def is_dyadic(self) -> bool:
        return self.kind == "finite" and self.p == 2

    def __repr__(self):
        return "real" if self.is_real else f"p={self.p}"


def legendre(a: int, p: int) -> int:
    """Quadratic residue symbol (a|p) for an odd prime p."""
    if p == 2 or not isprime(p):
        raise LocalArithError(f"legendre needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    ls = pow(a, (p - 1) // 2, p)
    return -1 if ls == p - 1 else 1


def p_star(p: int) -> int:
    """The signed prime p* = (-1)^((p-1)/2) * p, always = 1 mod 4."""
    if p == 2 or not isprime(p):
        raise LocalArithError(f"p_star needs an odd prime, got {p}")
    return p if p % 4 == 1 else -p


@lru_cache(maxsize=None)
def delta(p: int) -> int:
    """Canonical non-square unit: smallest positive non-residue for odd p,
    5 for p=2 (so that delta = 1 - 4*rho with rho = -1)."""
    if p == 2:
        return 5
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


RHO_2 = -1  # delta(2) == 1 - 4*RHO_2


def val_unit(a, p: int) -> tuple[int, Fraction]:
    """Split a nonzero rational as p^v * u with u a p-adic unit."""
    a = Fraction(a)
    if a == 0:
        raise LocalArithError("zero has no valuation decomposition")
    num, den = a.numerator, a.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def unit_residue(u: Fraction, p: int, modulus: int) -> int:
    """Residue of a p-adic unit rational modulo `modulus` (a power of p)."""
    num, den = u.numerator, u.denominator
    return num * pow(den, -1, modulus) % modulus


@dataclass(frozen=True)
class SquareClass:
    """An element of Q_v^x / (Q_v^x)^2.

    For odd finite p: (vbit, ubit) with ubit the Legendre bit (0 = residue).
    For p = 2: (vbit, u) with u in {1,3,5,7} the unit class mod 8.
    For the real place: vbit unused, u is the sign in {1,-1}.
    """

    place: Place
    vbit: int
    u: int

    @property
    def is_identity(self) -> bool:
        if self.place.is_real:
            return self.u == 1
        return self.vbit == 0 and self.u == (1 if self.place.p == 2 else 0)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.place != other.place:
            raise LocalArithError("square classes at different places")
        if self.place.is_real:
            return SquareClass(self.place, 0, self.u * other.u)
        if self.place.p == 2:
            return SquareClass(self.place, (self.vbit + other.vbit) % 2,
                               self.u * other.u % 8)
        return SquareClass(self.place, (self.vbit + other.vbit) % 2,
                           (self.u + other.u) % 2)

    def representative(self) -> int:
        """A small integer representative of the class."""
        if self.place.is_real:
            return self.u
        p = self.place.p
        if p == 2:
            return 2 ** self.vbit * self.u
        return p ** self.vbit * (delta(p) if self.u else 1)

    def __repr__(self):
        return f"cls({self.representative()} @ {self.place})"


def square_class(a, v: Place) -> SquareClass:
    """Class of a nonzero rational in Q_v^x/(Q_v^x)^2."""
    a = Fraction(a)
    if a == 0:
        raise LocalArithError("zero has no square class")
    if v.is_real:
        return SquareClass(v, 0, 1 if a > 0 else -1)
    p = v.p
    val, u = val_unit(a, p)
    if p == 2:
        return SquareClass(v, val % 2, unit_residue(u, 2, 8))
    bit = 0 if legendre(unit_residue(u, p, p), p) == 1 else 1
    return SquareClass(v, val % 2, bit)


def all_square_classes(v: Place) -> list[SquareClass]:
    if v.is_real:
        return [SquareClass(v, 0, 1), SquareClass(v, 0, -1)]
    if v.p == 2:
        return [SquareClass(v, vb, u) for vb in (0, 1) for u in (1, 3, 5, 7)]
    return [SquareClass(v, vb, ub) for vb in (0, 1) for ub in (0, 1)]


def is_local_square(a, v: Place) -> bool:
    return square_class(a, v).is_identity


def _eps(u: int) -> int:
    """(u-1)/2 mod 2 for odd u."""
    return (u - 1) // 2 % 2


def _omega(u: int) -> int:
    """(u^2-1)/8 mod 2 for odd u."""
    return (u * u - 1) // 8 % 2


def hilbert_symbol(a, b, v: Place) -> int:
    """Hilbert symbol (a, b)_v: 1 iff z^2 = a x^2 + b y^2 has a nontrivial
    solution over Q_v.  Closed-form; bimultiplicative and symmetric."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise LocalArithError("Hilbert symbol needs nonzero arguments")
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, ua = val_unit(a, p)
    beta, ub = val_unit(b, p)
    if p == 2:
        ra, rb = unit_residue(ua, 2, 8), unit_residue(ub, 2, 8)
        exp = _eps(ra) * _eps(rb) + alpha * _omega(rb) + beta * _omega(ra)
        return -1 if exp % 2 else 1
    la = legendre(unit_residue(ua, p, p), p)
    lb = legendre(unit_residue(ub, p, p), p)
    lm1 = legendre(p - 1, p)
    s = (lm1 ** (alpha * beta)) * (la ** beta) * (lb ** alpha)
    return s


@dataclass(frozen=True)
class QpIdeal:
    """An ideal p^n Z_p (exponent-coded) or the zero ideal."""

    p: int
    exponent: int | None  # None encodes the zero ideal

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __repr__(self):
        if self.is_zero:
            return f"(0) in Z_{self.p}"
        return f"{self.p}^{self.exponent}*Z_{self.p}"


def quadratic_defect(a, p: int) -> QpIdeal:
    """Quadratic defect of a nonzero rational over Z_p: the intersection of
    the ideals (a - x^2)Z_p; zero ideal iff a is a square in Q_p."""
    a = Fraction(a)
    if a == 0:
        raise LocalArithError("zero has no quadratic defect")
    if not isprime(p):
        raise LocalArithError(f"not a prime: {p}")
    v, u = val_unit(a, p)
    if v % 2 != 0:
        return QpIdeal(p, v)  # defect is the whole ideal aZ_p
    if p != 2:
        if legendre(unit_residue(u, p, p), p) == 1:
            return QpIdeal(p, None)
        return QpIdeal(p, v)
    r = unit_residue(u, 2, 8)
    if r == 1:
        return QpIdeal(2, None)
    if r == 5:
        return QpIdeal(2, v + 2)
    return QpIdeal(2, v + 1)  # u = 3, 7 mod 8


def relevant_places(*rats) -> list[Place]:
    """Real place plus the finite places dividing 2 and the numerators and
    denominators of the given rationals (where a Hilbert symbol can be -1)."""
    primes = {2}
    for r in rats:
        r = Fraction(r)
        for n in (abs(r.numerator), r.denominator):
            d = 2
            while d * d <= n:
                if n % d == 0:
                    primes.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                primes.add(n)
    return [Place.real()] + [Place.finite(p) for p in sorted(primes)]
