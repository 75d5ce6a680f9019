"""Isometry invariants of quadratic spaces over Q_v and the decision
procedures built on them: isotropy, representation of spaces by spaces,
k-universality, and Hasse-twisted sibling spaces.

Convention: the Hasse symbol of a diagonalization <a_1,...,a_n> is the
product of hilbert(a_i, a_j) over i <= j (so dimension 1 has symbol
hilbert(a, a)).  Every formula below is routed through inv_of_diagonal so
the convention is applied consistently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .local_arith import (
    LocalArithError,
    Place,
    SquareClass,
    all_square_classes,
    hilbert_symbol,
    square_class,
)


class SpaceError(ValueError):
    pass


@dataclass(frozen=True)
class SpaceInv:
    """Complete isometry invariant of a quadratic space over Q_v.

    Finite place: (dim, det square class, hasse in {1,-1}).
    Real place: signature (pos, neg); dim/det/hasse derived where needed.
    """

    place: Place
    dim: int
    det: SquareClass | None = None
    hasse: int | None = None
    pos: int | None = None
    neg: int | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise SpaceError("dim must be >= 1")
        if self.place.is_real:
            if self.pos is None or self.neg is None or self.pos + self.neg != self.dim:
                raise SpaceError("real space needs a signature adding to dim")
        else:
            if self.det is None or self.hasse not in (1, -1):
                raise SpaceError("finite space needs det class and hasse = +-1")

    def __repr__(self):
        if self.place.is_real:
            return f"Space(sig=({self.pos},{self.neg}))"
        return (f"Space(dim={self.dim}, det={self.det.representative()}, "
                f"hasse={self.hasse} @ {self.place})")


def inv_of_diagonal(entries, v: Place) -> SpaceInv:
    """Invariants of the diagonal space <a_1,...,a_n> over Q_v."""
    entries = [Fraction(a) for a in entries]
    if not entries:
        raise SpaceError("empty diagonal")
    if any(a == 0 for a in entries):
        raise SpaceError("zero diagonal entry")
    if v.is_real:
        pos = sum(1 for a in entries if a > 0)
        return SpaceInv(v, len(entries), pos=pos, neg=len(entries) - pos)
    det = square_class(entries[0], v)
    for a in entries[1:]:
        det = det * square_class(a, v)
    hasse = 1
    for i in range(len(entries)):
        for j in range(i, len(entries)):
            hasse *= hilbert_symbol(entries[i], entries[j], v)
    return SpaceInv(v, len(entries), det=det, hasse=hasse)


def hyperbolic_plane(v: Place) -> SpaceInv:
    return inv_of_diagonal([1, -1], v)


def is_hyperbolic_plane(V: SpaceInv) -> bool:
    if V.place.is_real:
        return V.pos == 1 and V.neg == 1
    return V.dim == 2 and V.det == square_class(-1, V.place)


def orthogonal_sum(V1: SpaceInv, V2: SpaceInv) -> SpaceInv:
    """Invariants of V1 perp V2 (same place)."""
    if V1.place != V2.place:
        raise SpaceError("orthogonal sum across different places")
    v = V1.place
    if v.is_real:
        return SpaceInv(v, V1.dim + V2.dim, pos=V1.pos + V2.pos,
                        neg=V1.neg + V2.neg)
    d1 = V1.det.representative()
    d2 = V2.det.representative()
    hasse = V1.hasse * V2.hasse * hilbert_symbol(d1, d2, v)
    return SpaceInv(v, V1.dim + V2.dim, det=V1.det * V2.det, hasse=hasse)


def is_isotropic(V: SpaceInv) -> bool:
    """Whether V contains a nonzero vector of norm 0."""
    if V.place.is_real:
        return V.pos >= 1 and V.neg >= 1
    v = V.place
    if V.dim == 1:
        return False
    if V.dim == 2:
        return V.det == square_class(-1, v)
    if V.dim == 3:
        # isotropic iff V perp <-det> is... equivalently the ternary space
        # has the hasse symbol of the split space [1, -1, -d].
        d = V.det.representative()
        split = inv_of_diagonal([1, -1, -d], v)
        return V.hasse == split.hasse
    if V.dim == 4:
        if V.det != square_class(1, v):
            return True
        return V == orthogonal_sum(hyperbolic_plane(v), hyperbolic_plane(v))
    return True


def space_represents(U: SpaceInv, V: SpaceInv) -> bool:
    """Whether U embeds isometrically into V (same place)."""
    if U.place != V.place:
        raise SpaceError("representation across different places")
    if U.place.is_real:
        return U.pos <= V.pos and U.neg <= V.neg
    v = U.place
    nu = V.dim - U.dim
    if nu < 0:
        return False
    if nu == 0:
        return U == V
    if nu == 1:
        d = (U.det * V.det).representative()
        return orthogonal_sum(U, inv_of_diagonal([d], v)) == V
    if nu == 2:
        if U.det != square_class(-1, v) * V.det:
            return True
        return orthogonal_sum(U, hyperbolic_plane(v)) == V
    return True


def space_k_universal(V: SpaceInv, k: int) -> bool:
    """Whether V represents every k-dimensional space over the same field."""
    if k < 1:
        raise SpaceError("k must be >= 1")
    if V.place.is_real:
        return min(V.pos, V.neg) >= k
    if V.dim >= k + 3:
        return True
    if k == 1 and V.dim in (2, 3) and is_isotropic(V):
        return True
    if k == 2:
        HH = orthogonal_sum(hyperbolic_plane(V.place), hyperbolic_plane(V.place))
        if V == HH:
            return True
    return False


def space_k_universal_complex(dim: int, k: int) -> bool:
    """Complex-place clause: every space of dimension >= k is k-universal."""
    if k < 1:
        raise SpaceError("k must be >= 1")
    return dim >= k


def sibling_space(V: SpaceInv) -> SpaceInv | None:
    """The space with the same dim and det but negated Hasse symbol, or None
    when no such space exists (dim 1, or V a hyperbolic plane)."""
    if V.place.is_real:
        raise SpaceError("sibling is a finite-place notion")
    if V.dim == 1 or is_hyperbolic_plane(V):
        return None
    return SpaceInv(V.place, V.dim, det=V.det, hasse=-V.hasse)


def enumerate_spaces(dim: int, v: Place) -> list[SpaceInv]:
    """All isometry classes of quadratic spaces of the given dimension
    over Q_v (finite place)."""
    if v.is_real:
        return [SpaceInv(v, dim, pos=s, neg=dim - s) for s in range(dim + 1)]
    out = []
    for det in all_square_classes(v):
        for hasse in (1, -1):
            if dim == 1:
                d = det.representative()
                if hasse != hilbert_symbol(d, d, v):
                    continue
            if dim == 2 and det == square_class(-1, v):
                if hasse != hilbert_symbol(-1, -1, v):
                    continue
            out.append(SpaceInv(v, dim, det=det, hasse=hasse))
    return out


def diagonalize_gram(G, v: Place | None = None) -> list[Fraction]:
    """Diagonalize a nonsingular symmetric rational matrix over Q by
    congruence; returns the diagonal entries (v is unused, kept for
    signature symmetry with callers that track the place)."""
    n = len(G)
    M = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    diag = []
    idx = list(range(n))
    while idx:
        # find a nonzero diagonal entry, or build one from an off-diagonal
        piv = next((i for i in idx if M[i][i] != 0), None)
        if piv is None:
            found = False
            for i in idx:
                for j in idx:
                    if i != j and M[i][j] != 0:
                        for t in range(n):
                            M[i][t] += M[j][t]
                        for t in range(n):
                            M[t][i] += M[t][j]
                        found = True
                        break
                if found:
                    break
            if not found:
                raise SpaceError("singular Gram matrix")
            piv = next(i for i in idx if M[i][i] != 0)
        a = M[piv][piv]
        diag.append(a)
        idx.remove(piv)
        for i in idx:
            c = M[i][piv] / a
            if c != 0:
                for t in range(n):
                    M[i][t] -= c * M[piv][t]
                for t in range(n):
                    M[t][i] -= c * M[t][piv]
    return diag


def inv_of_gram(G, v: Place) -> SpaceInv:
    """Invariants of the space spanned by a Gram matrix over Q_v."""
    return inv_of_diagonal(diagonalize_gram(G), v)
