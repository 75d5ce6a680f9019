"""Quadratic lattices over Z_p for odd p: Jordan invariants, minimal
testing sets for k-universality, the structural k-universality criteria
(k >= 2), and the maximal anisotropic binary lattice.

A lattice is stored by its Jordan data (scale exponent, rank, determinant
unit class) per block, which is a complete isometry invariant at odd p.
The criterion path never inspects p beyond the block data; the oracle
path materializes a diagonal Gram model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .local_arith import LocalArithError, Place, delta, legendre, val_unit
from .quad_space import SpaceInv, inv_of_diagonal
from .rep_oracle import OracleConfig, OracleResult, represents_lattice


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class JordanLatticeND:
    """Jordan data of a Z_p-lattice at an odd prime p.

    blocks: tuple of (scale_exp, rank, det_bit) with strictly increasing
    scale exponents; det_bit 0 means the block determinant's unit part is
    a square, 1 means it is in the class of Delta.
    """

    p: int
    blocks: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.p == 2 or self.p < 2:
            raise LatticeError(f"odd prime required, got {self.p}")
        if not self.blocks:
            raise LatticeError("lattice must have rank >= 1")
        prev = None
        for s, r, d in self.blocks:
            if r < 1:
                raise LatticeError("block rank must be >= 1")
            if d not in (0, 1):
                raise LatticeError("det_bit must be 0 or 1")
            if prev is not None and s <= prev:
                raise LatticeError("scale exponents must strictly increase")
            prev = s

    @property
    def rank(self) -> int:
        return sum(r for _, r, _ in self.blocks)

    def __repr__(self):
        return f"Jordan(p={self.p}, {format_jordan(self)})"


def diagonal_model(L: JordanLatticeND) -> list[Fraction]:
    """A diagonal Gram model: each block contributes p^s, ..., p^s,
    p^s * Delta^det_bit."""
    p, D = L.p, delta(L.p)
    out: list[Fraction] = []
    for s, r, d in L.blocks:
        scale = Fraction(p) ** s
        out.extend([scale] * (r - 1))
        out.append(scale * (D if d else 1))
    return out


def gram_of(L: JordanLatticeND) -> list[list[Fraction]]:
    diag = diagonal_model(L)
    n = len(diag)
    return [[diag[i] if i == j else Fraction(0) for j in range(n)]
            for i in range(n)]


def jordan_from_gram(G, p: int) -> JordanLatticeND:
    """Jordan invariants of the lattice with the given symmetric rational
    Gram matrix, by symmetric reduction with Z_p-unimodular moves."""
    if p == 2 or p < 2:
        raise LatticeError(f"odd prime required, got {p}")
    n = len(G)
    M = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    idx = list(range(n))
    diag: list[Fraction] = []

    def v(x):
        return val_unit(x, p)[0] if x != 0 else None

    while idx:
        # locate an entry of minimal valuation among the remaining rows/cols
        best, bi, bj = None, None, None
        for i in idx:
            for j in idx:
                w = v(M[i][j])
                if w is not None and (best is None or w < best
                                      or (w == best and i == j and bi != bj)):
                    best, bi, bj = w, i, j
        if best is None:
            raise LatticeError("singular Gram matrix")
        if bi != bj:
            # make a diagonal pivot: one of e_i +- e_j has Q-value of
            # minimal valuation (2 is a unit)
            sgn = 1
            if v(M[bi][bi] + 2 * M[bi][bj] + M[bj][bj]) not in (best,):
                sgn = -1
            for t in range(n):
                M[bi][t] += sgn * M[bj][t]
            for t in range(n):
                M[t][bi] += sgn * M[t][bj]
        a = M[bi][bi]
        diag.append(a)
        idx.remove(bi)
        for i in idx:
            c = M[i][bi] / a
            if c != 0:
                for t in range(n):
                    M[i][t] -= c * M[bi][t]
                for t in range(n):
                    M[t][i] -= c * M[t][bi]

    groups: dict[int, list[Fraction]] = {}
    for a in diag:
        s, _ = val_unit(a, p)
        groups.setdefault(s, []).append(a)
    blocks = []
    for s in sorted(groups):
        entries = groups[s]
        bit = 0
        for a in entries:
            _, u = val_unit(a, p)
            if legendre(u.numerator * pow(u.denominator, -1, p) % p, p) == -1:
                bit ^= 1
        blocks.append((s, len(entries), bit))
    return JordanLatticeND(p, tuple(blocks))


def space_of(L: JordanLatticeND) -> SpaceInv:
    return inv_of_diagonal(diagonal_model(L), Place.finite(L.p))


def _diag_lattice(entries, p: int) -> JordanLatticeND:
    n = len(entries)
    return jordan_from_gram(
        [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], p)


def testing_set(p: int, k: int) -> list[JordanLatticeND]:
    """Minimal set of rank-k lattices whose simultaneous representation
    is equivalent to k-universality over Z_p (p odd)."""
    if k < 1:
        raise LatticeError("k must be >= 1")
    D, pi = delta(p), p
    if k == 1:
        tails = [[1], [D], [pi], [D * pi]]
    elif k == 2:
        tails = [
            [1, -1], [1, -D], [pi, -D * pi], [1, -pi],
            [D, -D * pi], [1, -D * pi], [D, -pi],
        ]
    else:
        tails = [
            [1, 1, 1],
            [-D, pi, -D * pi],
            [1, 1, D],
            [-1, pi, -D * pi],
            [1, -1, -pi],
            [1, -D, -D * pi],
            [1, -1, -D * pi],
            [1, -D, -pi],
        ]
    out = []
    for tail in tails:
        entries = [1] * (k - len(tail)) + tail
        out.append(_diag_lattice(entries, p))
    return out


def _unimodular_rank(L: JordanLatticeND) -> int:
    for s, r, _ in L.blocks:
        if s == 0:
            return r
    return 0


def _scale1_rank(L: JordanLatticeND) -> int:
    for s, r, _ in L.blocks:
        if s == 1:
            return r
    return 0


def is_k_universal(L: JordanLatticeND, k: int) -> bool:
    """Structural k-universality criterion for k >= 2 at an odd prime.

    The lattice must start with a unimodular Jordan block; the decision
    then reads only the ranks of the first two blocks and the determinant
    class of the unimodular one.
    """
    if k < 2:
        raise LatticeError("criterion path needs k >= 2; use the testing set "
                           "for k = 1")
    if L.blocks[0][0] != 0:
        return False
    r1 = _unimodular_rank(L)
    r2 = _scale1_rank(L)
    if k == 2:
        if r1 == 3 and r2 >= 2:
            return True
        if r1 == 4:
            bit = L.blocks[0][2]
            if bit == 0:
                return True
            return r2 >= 1
        return r1 >= 5
    if r1 == k + 1 and r2 >= 2:
        return True
    if r1 == k + 2 and r2 >= 1:
        return True
    return r1 >= k + 3


def k_universal_criterion_label(L: JordanLatticeND, k: int) -> str:
    """Self-describing label for the clause that decides is_k_universal."""
    if L.blocks[0][0] != 0:
        return "no-unimodular-block"
    r1, r2 = _unimodular_rank(L), _scale1_rank(L)
    if k == 2:
        if r1 == 3 and r2 >= 2:
            return "unimodular-rank-3-plus-modular-rank-2"
        if r1 == 4 and L.blocks[0][2] == 0:
            return "unimodular-rank-4-square-det"
        if r1 == 4:
            return ("unimodular-rank-4-nonsquare-det-plus-modular-rank-1"
                    if r2 >= 1 else "unimodular-rank-4-nonsquare-det-isolated")
        return ("unimodular-rank-5" if r1 >= 5
                else "unimodular-rank-too-small")
    if r1 == k + 1:
        return ("unimodular-rank-k+1-plus-modular-rank-2" if r2 >= 2
                else "unimodular-rank-k+1-modular-deficient")
    if r1 == k + 2:
        return ("unimodular-rank-k+2-plus-modular-rank-1" if r2 >= 1
                else "unimodular-rank-k+2-modular-deficient")
    return ("unimodular-rank-k+3" if r1 >= k + 3
            else "unimodular-rank-too-small")


def testing_failures(L: JordanLatticeND, k: int,
                     cfg: OracleConfig | None = None) -> list[JordanLatticeND]:
    """Members of testing_set(p, k) that L fails to represent, decided by
    the search oracle.  Raises if the oracle cannot decide some member."""
    if cfg is None:
        cfg = OracleConfig(L.p)
    GL = gram_of(L)
    out = []
    for T in testing_set(L.p, k):
        res = represents_lattice(gram_of(T), GL, cfg)
        if res.verdict == "undecided":
            raise LatticeError(
                f"oracle undecided at precision {cfg.p}^{res.precision} "
                f"for testing lattice {T}")
        if res.verdict == "no":
            out.append(T)
    return out


def is_k_universal_via_testing(L: JordanLatticeND, k: int,
                               cfg: OracleConfig | None = None) -> bool:
    return not testing_failures(L, k, cfg)


def maximal_binary_anisotropic(p: int) -> JordanLatticeND:
    """The maximal lattice on the anisotropic binary space <pi, -Delta*pi>;
    its Jordan data is a single p-modular block of rank 2."""
    return _diag_lattice([p, -delta(p) * p], p)


def parse_jordan(text: str, p: int) -> JordanLatticeND:
    """Parse comma-separated `scale:rank:det` triples, det in {1, D}."""
    blocks = []
    for part in text.split(","):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise LatticeError(f"bad Jordan block descriptor: {part!r}")
        s, r, d = fields
        if d not in ("1", "D"):
            raise LatticeError(f"det field must be 1 or D, got {d!r}")
        try:
            blocks.append((int(s), int(r), 0 if d == "1" else 1))
        except ValueError as exc:
            raise LatticeError(f"bad Jordan block descriptor: {part!r}") from exc
    return JordanLatticeND(p, tuple(blocks))


def format_jordan(L: JordanLatticeND) -> str:
    return ",".join(f"{s}:{r}:{'D' if d else '1'}" for s, r, d in L.blocks)
