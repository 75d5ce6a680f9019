"""Quadratic lattices over Z_2: block presentations gamma*A(xi, eta) and
<a>, scale/norm ideals, the classification of binary maximal lattices,
the 2-universality testing set, the quaternary 2-universality criterion,
and the impossibility of a classic 2-universal quaternary lattice.

Conventions fixed throughout: pi = 2, Delta = 5 = 1 - 4*rho with
rho = -1.  Plane(g, xi, eta) denotes the binary lattice g*A(xi, eta)
with Gram [[g*xi, g], [g, g*eta]]; all derived quantities (scale, norm,
space invariants) are computed from the Gram matrix, never from block
syntax, so isotropic Plane presentations are fine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .local_arith import RHO_2, Place, delta, hilbert_symbol, val_unit
from .quad_space import SpaceInv, hyperbolic_plane, inv_of_gram, orthogonal_sum
from .rep_oracle import OracleConfig, represents_lattice

P2 = Place.finite(2)


class DyadicError(ValueError):
    pass


@dataclass(frozen=True)
class Diag:
    a: Fraction

    def __repr__(self):
        return f"<{self.a}>"


@dataclass(frozen=True)
class Plane:
    g: Fraction
    xi: Fraction
    eta: Fraction

    def __repr__(self):
        return f"{self.g}*A({self.xi},{self.eta})"


@dataclass(frozen=True)
class DyadicLattice:
    components: tuple

    def __post_init__(self):
        if not self.components:
            raise DyadicError("lattice must have rank >= 1")
        for c in self.components:
            if isinstance(c, Diag):
                if c.a == 0:
                    raise DyadicError("zero diagonal component")
            elif isinstance(c, Plane):
                if c.g == 0:
                    raise DyadicError("zero scaling on a plane component")
                for x in (c.xi, c.eta):
                    if val_unit(x, 2)[0] < 0 if x != 0 else False:
                        raise DyadicError("plane parameters must be 2-integral")
            else:
                raise DyadicError(f"unknown component: {c!r}")

    @property
    def rank(self) -> int:
        return sum(2 if isinstance(c, Plane) else 1 for c in self.components)

    def __repr__(self):
        return " + ".join(repr(c) for c in self.components)


def dlat(*components) -> DyadicLattice:
    """Build a DyadicLattice from ('d', a) / ('p', g, xi, eta) tuples or
    ready-made Diag/Plane components."""
    out = []
    for c in components:
        if isinstance(c, (Diag, Plane)):
            out.append(c)
        elif c[0] == "d":
            out.append(Diag(Fraction(c[1])))
        elif c[0] == "p":
            out.append(Plane(Fraction(c[1]), Fraction(c[2]), Fraction(c[3])))
        else:
            raise DyadicError(f"unknown component spec: {c!r}")
    return DyadicLattice(tuple(out))


def gram_of(L: DyadicLattice) -> list[list[Fraction]]:
    n = L.rank
    G = [[Fraction(0)] * n for _ in range(n)]
    pos = 0
    for c in L.components:
        if isinstance(c, Diag):
            G[pos][pos] = Fraction(c.a)
            pos += 1
        else:
            G[pos][pos] = c.g * c.xi
            G[pos + 1][pos + 1] = c.g * c.eta
            G[pos][pos + 1] = G[pos + 1][pos] = Fraction(c.g)
            pos += 2
    return G


def _det(G) -> Fraction:
    n = len(G)
    M = [row[:] for row in G]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for t in range(col, n):
                M[r][t] -= f * M[col][t]
    return det


def scale_norm(L: DyadicLattice) -> tuple[int, int]:
    """Exact 2-adic exponents of the scale and norm ideals.

    Scale is generated by all B-values (the Gram entries); norm by the
    Q-values together with 2*scale, so its exponent is
    min(diagonal valuations, 1 + scale exponent).
    """
    G = gram_of(L)
    n = len(G)
    s = min(val_unit(G[i][j], 2)[0]
            for i in range(n) for j in range(n) if G[i][j] != 0)
    diag_vals = [val_unit(G[i][i], 2)[0] for i in range(n) if G[i][i] != 0]
    return s, min(diag_vals + [s + 1])


def space_of(L: DyadicLattice) -> SpaceInv:
    return inv_of_gram(gram_of(L), P2)


def lemma41_check(t: int, sigma: int, e: int = 1) -> int:
    """Hilbert symbol (1 - sigma*2^t, 1 - 4*rho*sigma^{-1}*2^{-t}) at 2.

    Evaluated concretely for e=1 (so t=1); for e > 1 the identity is only
    asserted (the base field here is Q, so larger ramification has no
    concrete model) and the constant -1 is returned.
    """
    if t % 2 == 0 or not 1 <= t <= 2 * e - 1:
        raise DyadicError(f"t must be odd in [1, {2 * e - 1}], got {t}")
    if e != 1:
        return -1
    a = 1 - Fraction(sigma) * 2 ** t
    b = 1 - Fraction(4 * RHO_2, sigma) * Fraction(2) ** (-t)
    s = hilbert_symbol(a, b, P2)
    if s != -1:
        raise DyadicError(f"hilbert({a}, {b}) = {s}, expected -1")
    return s


@dataclass(frozen=True)
class MaximalBinaryDescriptor:
    """Parametric description of a binary maximal lattice over Z_2.

    Type I: 2^{-i} A(2^i, sigma*2^{i+1}), optionally scaled by the
    non-represented unit 1 - 4*rho*sigma^{-1}*2^{-2i-1}.
    Type II: <lead, sigma*2> with lead in {1, Delta}.
    Type III: 2^{-1}A(2, 2*rho), optionally scaled by 2.
    Type IV: 2^{-1}A(0, 0).
    """

    type_tag: str  # "I" | "II" | "III" | "IV"
    i: int | None = None
    sigma: int | None = None
    lead: int | None = None
    twist: bool | None = None

    def materialize(self) -> DyadicLattice:
        """Concrete lattice over Z_2 (ramification index 1 only)."""
        if self.type_tag == "I":
            if self.i != 0:
                raise DyadicError("only i = 0 exists at ramification index 1")
            g = Fraction(1)
            if self.twist:
                g *= 1 - Fraction(4 * RHO_2, self.sigma * 2)
            return dlat(("p", g, 1, 2 * self.sigma))
        if self.type_tag == "II":
            return dlat(("d", self.lead), ("d", 2 * self.sigma))
        if self.type_tag == "III":
            g = Fraction(1, 2) * (2 if self.twist else 1)
            return dlat(("p", g, 2, 2 * RHO_2))
        return dlat(("p", Fraction(1, 2), 0, 0))


def maximal_binary_list(e: int) -> list[MaximalBinaryDescriptor]:
    """All binary maximal-lattice descriptors at ramification index e
    (unit parameters range over the classes mod 8 when e = 1)."""
    if e < 1:
        raise DyadicError("e must be >= 1")
    units = (1, 3, 5, 7) if e == 1 else (1, delta(2))
    out = []
    for i in range(e):
        for sigma in units:
            for twist in (False, True):
                out.append(MaximalBinaryDescriptor("I", i=i, sigma=sigma,
                                                   twist=twist))
    for lead in (1, delta(2)):
        for sigma in units:
            out.append(MaximalBinaryDescriptor("II", lead=lead, sigma=sigma))
    for twist in (False, True):
        out.append(MaximalBinaryDescriptor("III", twist=twist))
    out.append(MaximalBinaryDescriptor("IV"))
    return out


def testing_set_2_universal(e: int = 1) -> list[DyadicLattice]:
    """The binary maximal lattices over Z_2, one per binary quadratic
    space: representing all of them is equivalent to 2-universality."""
    if e != 1:
        raise DyadicError("materialization only at ramification index 1")
    seen = {}
    for desc in maximal_binary_list(1):
        L = desc.materialize()
        V = space_of(L)
        key = (V.det.vbit, V.det.u, V.hasse)
        if key not in seen:
            seen[key] = L
    out = list(seen.values())
    if len(out) != 15:
        raise DyadicError(f"expected 15 binary spaces, got {len(out)}")
    return out


def is_modular(L: DyadicLattice) -> bool:
    """Whether the Jordan splitting has a single block, i.e. the whole
    lattice is 2^s-modular for s = scale exponent.  For a 2^s-modular
    lattice det has valuation s*rank, and conversely."""
    s, _ = scale_norm(L)
    return val_unit(_det(gram_of(L)), 2)[0] == s * L.rank


def is_2_universal_quaternary(L: DyadicLattice) -> bool:
    """Quaternary 2-universality over Z_2: holds exactly for the lattice
    2^{-1}A(0,0) + 2^{-1}A(0,0), characterized by scale exponent -1,
    modularity, norm exponent 0, and hyperbolic ambient space."""
    if L.rank != 4:
        raise DyadicError(f"quaternary criterion needs rank 4, got {L.rank}")
    s, n = scale_norm(L)
    if s != -1 or n != 0 or not is_modular(L):
        return False
    HH = orthogonal_sum(hyperbolic_plane(P2), hyperbolic_plane(P2))
    return space_of(L) == HH


def two_universal_failures(L: DyadicLattice,
                           cfg: OracleConfig | None = None) -> list[DyadicLattice]:
    """Testing-set members L fails to represent, decided by the oracle."""
    if cfg is None:
        cfg = OracleConfig(2)
    G = gram_of(L)
    out = []
    for T in testing_set_2_universal(1):
        res = represents_lattice(gram_of(T), G, cfg)
        if res.verdict == "undecided":
            raise DyadicError(f"oracle undecided on {T} at precision "
                              f"2^{res.precision}")
        if res.verdict == "no":
            out.append(T)
    return out


def lemma44_nonrepresentation(N: DyadicLattice) -> bool:
    """Whether N satisfies scale(N) contained in O_2 and norm(N) contained
    in 2*Z_2 -- in which case 2^{-1}A(0,0) + N cannot represent
    2^{-1}A(2, 2*rho)."""
    s, n = scale_norm(N)
    return s >= 0 and n >= 1


def half_hyperbolic() -> DyadicLattice:
    return dlat(("p", Fraction(1, 2), 0, 0))


def two_universal_quaternary() -> DyadicLattice:
    return dlat(("p", Fraction(1, 2), 0, 0), ("p", Fraction(1, 2), 0, 0))


def anisotropic_binary_maximal() -> DyadicLattice:
    """2^{-1}A(2, 2*rho): the maximal lattice on the norm form of the
    unramified quadratic extension."""
    return dlat(("p", Fraction(1, 2), 2, 2 * RHO_2))


def default_classic_quaternary_family() -> list[DyadicLattice]:
    """A small family of classic (even-scale) quaternary lattices used
    for witness scans of the no-classic-2-universal fact."""
    fam = [
        dlat(("d", 1), ("d", -1), ("d", 1), ("d", -1)),
        dlat(("p", 1, 1, 0), ("p", 1, 2, 0)),
        dlat(("d", 1), ("d", 1), ("d", 1), ("d", 1)),
        dlat(("d", 1), ("d", 2), ("d", 5), ("d", 10)),
        dlat(("p", 1, 0, 0), ("p", 1, 0, 0)),
        dlat(("d", 1), ("d", -5), ("p", 1, 2, -2)),
    ]
    for a, b in itertools.combinations((1, -1, 2, 5, -5, 10), 2):
        fam.append(dlat(("d", 1), ("d", a), ("d", b), ("d", 2)))
    return fam


def classic_2_universal_quaternary_exists() -> bool:
    """No classic 2-universal quaternary lattice exists over Z_2 (and no
    dyadic local ring); see classic_quaternary_witness for per-lattice
    evidence."""
    return False


def classic_quaternary_witness(L: DyadicLattice,
                               cfg: OracleConfig | None = None) -> DyadicLattice:
    """A binary testing lattice the classic quaternary L fails to
    represent; raises if L represents the whole testing set (which would
    contradict classic_2_universal_quaternary_exists)."""
    s, n = scale_norm(L)
    if L.rank != 4 or s < 0 or n < 0:
        raise DyadicError("witness scan expects a classic quaternary lattice")
    fails = two_universal_failures(L, cfg)
    if not fails:
        raise DyadicError(f"{L} represents the full testing set")
    return fails[0]


def parse_blocks(text: str) -> DyadicLattice:
    """Parse semicolon-separated block descriptors: `d:a` for <a>,
    `p:g:x:h` for g*A(x, h); rationals as `n/m`."""
    comps = []
    for part in text.split(";"):
        fields = part.strip().split(":")
        try:
            if fields[0] == "d" and len(fields) == 2:
                comps.append(("d", Fraction(fields[1])))
            elif fields[0] == "p" and len(fields) == 4:
                comps.append(("p", Fraction(fields[1]), Fraction(fields[2]),
                              Fraction(fields[3])))
            else:
                raise DyadicError(f"bad block descriptor: {part!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise DyadicError(f"bad block descriptor: {part!r}") from exc
    return dlat(*comps)


def format_blocks(L: DyadicLattice) -> str:
    parts = []
    for c in L.components:
        if isinstance(c, Diag):
            parts.append(f"d:{c.a}")
        else:
            parts.append(f"p:{c.g}:{c.xi}:{c.eta}")
    return ";".join(parts)
