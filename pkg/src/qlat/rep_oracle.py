"""Independent brute-force oracle for lattice representation over Z_p.

Decides whether a lattice L (given by a Gram matrix) embeds into M over
Z_p by a digit-by-digit depth-first search for the image vectors.  A
partial solution modulo p^j is extended to p^(j+1) by solving the
linearized Gram congruence for the next p-adic digits; digits of a
coordinate sitting in a p^s-scaled part of M only start to matter at
level s and are only branched from there on.  A branch that survives to
the certificate depth R = 2*ord_p(det L) + 2e + 1 + lift_margin is a
"yes" (the Gram minor's valuation is then pinned, so the congruence
solution lifts to an exact embedding); an exhausted tree is an
unconditional "no" (an exact embedding would reduce mod p^R).

The driver explores in rounds of iterative broadening: every subtree gets
a per-round node quota, and a subtree that overruns it is cut short and
retried only in the next round with a larger quota.  A witness found in
any round is a "yes"; "no" is reported only by a round that finished with
no subtree cut, i.e. after genuine exhaustion.  This keeps easy witnesses
cheap even when an earlier sibling subtree is astronomically expensive to
refute.

Everything is exact integer/Fraction arithmetic; no floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .local_arith import val_unit


class OracleError(ValueError):
    pass


class OracleResourceError(OracleError):
    """Search exceeded its node budget; carries the partial search size."""

    def __init__(self, nodes: int):
        super().__init__(f"oracle node budget exceeded after {nodes} nodes")
        self.nodes = nodes


class _QuotaHit(Exception):
    """A subtree exhausted its per-round node quota (internal control flow)."""


@dataclass(frozen=True)
class OracleConfig:
    p: int
    precision_exp: int | None = None  # None: derive from the query
    lift_margin: int = 2
    node_budget: int = 5_000_000

    def __post_init__(self):
        if not isprime(self.p):
            raise OracleError(f"not a prime: {self.p}")
        if self.lift_margin < 0:
            raise OracleError("lift_margin must be >= 0")
        if self.precision_exp is not None and self.precision_exp < 1:
            raise OracleError("precision_exp must be >= 1")


@dataclass(frozen=True)
class OracleResult:
    verdict: str  # "yes" | "no" | "undecided"
    precision: int
    witness: tuple | None = None  # tuple of image vectors (per column of L)

    def __bool__(self):
        if self.verdict == "undecided":
            raise OracleError(f"undecided at precision {self.precision}")
        return self.verdict == "yes"


def _to_frac_matrix(G):
    n = len(G)
    M = [[Fraction(x) for x in row] for row in G]
    for row in M:
        if len(row) != n:
            raise OracleError("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise OracleError("Gram matrix must be symmetric")
    return M


def _det(M):
    n = len(M)
    A = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f != 0:
                for t in range(c, n):
                    A[r][t] -= f * A[c][t]
    return det


def _min_val(M, p):
    return min(val_unit(x, p)[0] for row in M for x in row if x != 0)


def _solve_mod_p(rows, rhs, nvars, p):
    """Solve a linear system over F_p.  Returns (particular, kernel_basis)
    or None if infeasible."""
    A = [[c % p for c in r] + [b % p] for r, b in zip(rows, rhs)]
    m = len(A)
    pivots = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if A[i][nvars] != 0:
            return None
    part = [0] * nvars
    for i, c in enumerate(pivots):
        part[c] = A[i][nvars]
    free = [c for c in range(nvars) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [0] * nvars
        vec[fc] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-A[i][fc]) % p
        kernel.append(vec)
    return part, kernel


def _iter_affine(part, kernel, p):
    """All solutions part + span(kernel) over F_p, coefficient-lex order."""
    if not kernel:
        yield part[:]
        return
    nvars = len(part)
    for coeffs in itertools.product(range(p), repeat=len(kernel)):
        sol = part[:]
        for c, vec in zip(coeffs, kernel):
            if c:
                for i in range(nvars):
                    sol[i] = (sol[i] + c * vec[i]) % p
        yield sol


class _Search:
    """Digit-by-digit DFS for k image vectors in M with Gram congruent
    to L.  L and M are integer matrices; depth is the target level."""

    def __init__(self, L, M, p, depth, budget):
        self.L = L
        self.M = M
        self.p = p
        self.k = len(L)
        self.n = len(M)
        self.depth = depth
        self.budget = budget
        self.nodes = 0
        # activation scale of each coordinate: min valuation of its M-row
        self.scale = []
        for i in range(self.n):
            row = [x for x in M[i] if x != 0]
            if not row:
                raise OracleError("zero row in Gram matrix")
            self.scale.append(min(val_unit(x, p)[0] for x in row))
        # coordinates whose M-row is purely diagonal admit exact isometries
        # of M (sign flips, and swaps between coordinates with equal
        # diagonal entry); they are used to canonicalize the first column
        self.diag_ok = [all(M[i][j] == 0 for j in range(self.n) if j != i)
                        for i in range(self.n)]
        self.sym_groups = {}
        for i in range(self.n):
            if self.diag_ok[i]:
                self.sym_groups.setdefault(M[i][i], []).append(i)

    # per-child subtree quota for the first round and its growth factor;
    # rounds with a larger quota rerun the search until it either finds a
    # witness or exhausts the tree with no subtree cut short
    _QUOTA0 = 4096
    _QUOTA_GROWTH = 32

    def run(self):
        cols = [[0] * self.n for _ in range(self.k)]
        quota = self._QUOTA0
        while True:
            self.quota = quota
            self.truncated = False
            self.cap_ends = [self.budget]
            found = self._extend(cols, 0)
            if found is not None or not self.truncated:
                return found
            quota *= self._QUOTA_GROWTH

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleResourceError(self.nodes)
        if self.nodes > self.cap_ends[-1]:
            raise _QuotaHit

    def _bil(self, x, y):
        M, n = self.M, self.n
        s = 0
        for i in range(n):
            xi = x[i]
            if xi:
                Mi = M[i]
                s += xi * sum(Mi[j] * y[j] for j in range(n) if y[j])
        return s

    def _extend(self, cols, level):
        if level >= self.depth:
            return cols
        ends = self.cap_ends
        for child in self._children(cols, level):
            ends.append(min(ends[-1], self.nodes + self.quota))
            try:
                found = self._extend(child, level + 1)
            except _QuotaHit:
                ends.pop()
                if self.nodes > ends[-1]:
                    raise  # an enclosing subtree's quota is also spent
                self.truncated = True
                continue
            ends.pop()
            if found is not None:
                return found
        return None

    def _children(self, cols, level):
        """Solutions of the Gram congruence mod p^(level+1) extending the
        given solution mod p^level, yielded lazily and deterministically."""
        p, n, k = self.p, self.n, self.k
        pj = p ** level
        pj1 = pj * p
        active = [a for a in range(n) if self.scale[a] <= level]
        if not active:
            # nothing can move; the congruence must already hold
            ok = all(
                (self._bil(cols[i], cols[l]) - self.L[i][l]) % pj1 == 0
                for i in range(k) for l in range(i, k))
            if ok:
                yield [c[:] for c in cols]
            return
        shift = {a: pj // p ** self.scale[a] for a in active}  # p^(level - s_a)
        Mx = [[self._bil_row(a, cols[c]) for a in range(n)] for c in range(k)]

        # constraint per (i, l), i <= l: lin.t + quad(t,t) = const mod p
        # after dividing the exact mod p^(level+1) congruence by p^level.
        # A constraint is attached to the last column whose digits occur in
        # it with a nonzero coefficient and is evaluated once the columns up
        # to that one are chosen; a constraint with no surviving variables
        # must already hold, else the whole level is infeasible.
        by_col = [[] for _ in range(k)]
        for i in range(k):
            for l in range(i, k):
                const = (self.L[i][l] - self._bil(cols[i], cols[l]))
                if const % pj != 0:
                    raise OracleError("internal: congruence invariant broken")
                lin = {}
                quad = {}
                if i == l:
                    for a in active:
                        co = 2 * shift[a] * Mx[i][a]
                        lin[(i, a)] = (lin.get((i, a), 0) + co // pj) % p \
                            if co % pj == 0 else self._bad()
                    for ai_idx, a in enumerate(active):
                        for b in active[ai_idx:]:
                            mult = 1 if a == b else 2
                            co = mult * shift[a] * shift[b] * self.M[a][b]
                            if co % pj1 == 0:
                                continue
                            key = tuple(sorted(((i, a), (i, b))))
                            quad[key] = (quad.get(key, 0) + co // pj) % p
                else:
                    for a in active:
                        co = shift[a] * Mx[l][a]
                        lin[(i, a)] = (lin.get((i, a), 0) + co // pj) % p
                        co = shift[a] * Mx[i][a]
                        lin[(l, a)] = (lin.get((l, a), 0) + co // pj) % p
                    for a in active:
                        for b in active:
                            co = shift[a] * shift[b] * self.M[a][b]
                            if co % pj1 == 0:
                                continue
                            key = ((i, a), (l, b))
                            quad[key] = (quad.get(key, 0) + co // pj) % p
                lin = {v: co for v, co in lin.items() if co % p}
                quad = {vs: co for vs, co in quad.items() if co % p}
                cst = (const // pj) % p
                cols_used = {v[0] for v in lin}
                cols_used.update(v[0] for vs in quad for v in vs)
                if not cols_used:
                    if cst:
                        return
                    continue
                by_col[max(cols_used)].append((cst, lin, quad))

        # With no quadratic terms the whole level is one joint linear
        # system; solve it globally so infeasibility is detected at once.
        if not any(quad for col in by_col for _, _, quad in col):
            allvars = [(c, a) for c in range(k) for a in active]
            pos = {v: i for i, v in enumerate(allvars)}
            rows, rhs = [], []
            for col in by_col:
                for cst, lin, _ in col:
                    row = [0] * len(allvars)
                    for v, co in lin.items():
                        row[pos[v]] = (row[pos[v]] + co) % p
                    rows.append(row)
                    rhs.append(cst)
            sol = _solve_mod_p(rows, rhs, len(allvars), p)
            if sol is None:
                return
            part, kernel = sol
            for t in _iter_affine(part, kernel, p):
                self._tick()
                new_cols = [col[:] for col in cols]
                for (c, a), ti in zip(allvars, t):
                    new_cols[c][a] += ti * shift[a]
                ok = all(
                    (self._bil(new_cols[i], new_cols[l]) - self.L[i][l])
                    % pj1 == 0
                    for i in range(k) for l in range(i, k))
                if ok:
                    yield new_cols
            return

        # Otherwise choose the digits one column at a time: with earlier
        # columns fixed, cross-column quadratic terms become linear, so
        # each step is a linear solve over F_p plus an enumeration of the
        # (few) variables that occur quadratically.
        col_vars = [[(c, a) for a in active] for c in range(k)]

        # Exact isometries of M (sign flips and equal-entry swaps among
        # purely diagonal coordinates) let the first column's digits, at
        # the level where a coordinate first activates, be restricted to
        # one representative per orbit: flip-normalized and sorted.
        act_pos = {a: i for i, a in enumerate(active)}
        canon_groups = [
            [act_pos[a] for a in grp]
            for grp in self.sym_groups.values()
            if self.scale[grp[0]] == level]

        def canon_ok(qv):
            for positions in canon_groups:
                if all(i in qv for i in positions):
                    ds = [qv[i] for i in positions]
                    if any(d > p // 2 for d in ds) or \
                            ds != sorted(ds, reverse=True):
                        return False
            return True

        # Per-column pre-pass: enumerate the column's quadratically
        # occurring digits once, keeping only the assignments compatible
        # with the constraints that touch this column alone.  An empty
        # list kills the whole level immediately; otherwise the search
        # below iterates these cases instead of rediscovering them.
        def column_cases(c):
            vars_c = col_vars[c]
            pos = {v: i for i, v in enumerate(vars_c)}
            solo = [cn for cn in by_col[c]
                    if all(v in pos for v in cn[1])
                    and all(v1 in pos and v2 in pos for v1, v2 in cn[2])]
            qidx = sorted({pos[v] for _, _, quad in solo
                           for vs in quad for v in vs})
            rest = [i for i in range(len(vars_c)) if i not in qidx]
            cases = []
            for qassign in itertools.product(range(p), repeat=len(qidx)):
                if qidx:
                    self._tick()
                qv = dict(zip(qidx, qassign))
                if c == 0 and canon_groups and not canon_ok(qv):
                    continue
                rows, rhs = [], []
                ok = True
                for cst, lin, quad in solo:
                    c2 = cst
                    row = [0] * len(vars_c)
                    for v, co in lin.items():
                        row[pos[v]] = (row[pos[v]] + co) % p
                    for (v1, v2), co in quad.items():
                        c2 = (c2 - co * qv[pos[v1]] * qv[pos[v2]]) % p
                    for i in qidx:
                        if row[i]:
                            c2 = (c2 - row[i] * qv[i]) % p
                    r2 = [row[i] for i in rest]
                    if any(r2):
                        rows.append(r2)
                        rhs.append(c2)
                    elif c2 % p != 0:
                        ok = False
                        break
                if ok and _solve_mod_p(rows, rhs, len(rest), p) is not None:
                    cases.append(qv)
            return qidx, cases

        col_qidx, col_cases = [], []
        for c in range(k):
            qidx, cases = column_cases(c)
            if not cases:
                return
            col_qidx.append(qidx)
            col_cases.append(cases)

        has_cross = any(v1[0] != v2[0]
                        for col in by_col for _, _, quad in col
                        for v1, v2 in quad)
        ncombo = 1
        for cs in col_cases:
            ncombo *= len(cs)

        # Without cross-column quadratic terms the level is linear once
        # every column's quadratic digits are fixed, so (for a modest
        # number of case combinations) one joint solve per combination
        # decides the whole level without the column-by-column cascade.
        if not has_cross and ncombo <= 20000:
            allvars = [(c, a) for c in range(k) for a in active]
            gpos = {v: i for i, v in enumerate(allvars)}
            for combo in itertools.product(*col_cases):
                self._tick()
                sub = {}
                for c, qv in enumerate(combo):
                    for i, d in qv.items():
                        sub[gpos[col_vars[c][i]]] = d
                rest = [i for i in range(len(allvars)) if i not in sub]
                rpos = {i: j for j, i in enumerate(rest)}
                rows, rhs = [], []
                feasible = True
                for col in by_col:
                    for cst, lin, quad in col:
                        c2 = cst
                        row = [0] * len(rest)
                        for v, co in lin.items():
                            g = gpos[v]
                            if g in sub:
                                c2 = (c2 - co * sub[g]) % p
                            else:
                                row[rpos[g]] = (row[rpos[g]] + co) % p
                        for (v1, v2), co in quad.items():
                            c2 = (c2 - co * sub[gpos[v1]] * sub[gpos[v2]]) % p
                        if any(row):
                            rows.append(row)
                            rhs.append(c2)
                        elif c2 % p != 0:
                            feasible = False
                            break
                    if not feasible:
                        break
                if not feasible:
                    continue
                sol = _solve_mod_p(rows, rhs, len(rest), p)
                if sol is None:
                    continue
                part, kernel = sol
                for t in _iter_affine(part, kernel, p):
                    self._tick()
                    new_cols = [col[:] for col in cols]
                    for g, (c, a) in enumerate(allvars):
                        d = sub[g] if g in sub else t[rpos[g]]
                        new_cols[c][a] += d * shift[a]
                    ok = all(
                        (self._bil(new_cols[i], new_cols[l]) - self.L[i][l])
                        % pj1 == 0
                        for i in range(k) for l in range(i, k))
                    if ok:
                        yield new_cols
            return

        def assign_col(c, val):
            if c == k:
                new_cols = [col[:] for col in cols]
                for (cc, a), t in val.items():
                    new_cols[cc][a] += t * shift[a]
                # exact safety check of the congruence
                ok = all(
                    (self._bil(new_cols[i], new_cols[l]) - self.L[i][l])
                    % pj1 == 0
                    for i in range(k) for l in range(i, k))
                if ok:
                    yield new_cols
                return
            vars_c = col_vars[c]
            pos = {v: i for i, v in enumerate(vars_c)}
            cons = []
            for const, lin, quad in by_col[c]:
                cst = const % p
                row = [0] * len(vars_c)
                qterms = []
                for v, co in lin.items():
                    if v in pos:
                        row[pos[v]] = (row[pos[v]] + co) % p
                    else:
                        cst = (cst - co * val[v]) % p
                for (v1, v2), co in quad.items():
                    b1, b2 = v1 in pos, v2 in pos
                    if b1 and b2:
                        qterms.append((pos[v1], pos[v2], co))
                    elif b1:
                        row[pos[v1]] = (row[pos[v1]] + co * val[v2]) % p
                    elif b2:
                        row[pos[v2]] = (row[pos[v2]] + co * val[v1]) % p
                    else:
                        cst = (cst - co * val[v1] * val[v2]) % p
                cons.append((cst, row, qterms))
            # the quadratically occurring variables are exactly the
            # pre-enumerated per-column cases; everything else is linear
            qlist = col_qidx[c]
            rest = [i for i in range(len(vars_c)) if i not in set(qlist)]
            rest_pos = {i: j for j, i in enumerate(rest)}
            for qv in col_cases[c]:
                self._tick()
                rows, rhs = [], []
                feasible = True
                for cst, row, qterms in cons:
                    c2 = cst
                    for i in qlist:
                        if row[i]:
                            c2 = (c2 - row[i] * qv[i]) % p
                    for i1, i2, co in qterms:
                        c2 = (c2 - co * qv[i1] * qv[i2]) % p
                    r2 = [row[i] for i in rest]
                    if any(r2):
                        rows.append(r2)
                        rhs.append(c2)
                    elif c2 % p != 0:
                        feasible = False
                        break
                if not feasible:
                    continue
                sol = _solve_mod_p(rows, rhs, len(rest), p)
                if sol is None:
                    continue
                part, kernel = sol
                for t_rest in _iter_affine(part, kernel, p):
                    self._tick()
                    nval = dict(val)
                    for i, v in enumerate(vars_c):
                        nval[v] = qv[i] if i in qv else t_rest[rest_pos[i]]
                    yield from assign_col(c + 1, nval)

        yield from assign_col(0, {})

    def _bil_row(self, a, x):
        M, n = self.M, self.n
        return sum(M[a][b] * x[b] for b in range(n) if x[b])

    @staticmethod
    def _bad():
        raise OracleError("internal: non-integral linear coefficient")


def _prepare(L, M, cfg: OracleConfig):
    L = _to_frac_matrix(L)
    M = _to_frac_matrix(M)
    dL_raw, dM_raw = _det(L), _det(M)
    if dL_raw == 0 or dM_raw == 0:
        raise OracleError("singular Gram matrix")
    p = cfg.p
    s = max(0, -min(_min_val(L, p), _min_val(M, p)))
    f = Fraction(p) ** s
    Ls = [[x * f for x in row] for row in L]
    Ms = [[x * f for x in row] for row in M]
    if any(x.denominator % p == 0 for row in Ls for x in row if x != 0):
        raise OracleError("internal: rescale failed")
    # clear denominators coprime to p with one common scalar (representation
    # is invariant under scaling both Grams by the same constant)
    lcm = 1
    for row in Ls + Ms:
        for x in row:
            if x != 0:
                lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    Ls = [[int(x * lcm) for x in row] for row in Ls]
    Ms = [[int(x * lcm) for x in row] for row in Ms]
    dL = val_unit(_det([[Fraction(x) for x in r] for r in Ls]), p)[0]
    dM = val_unit(_det([[Fraction(x) for x in r] for r in Ms]), p)[0]
    e = 1 if p == 2 else 0
    required = 2 * e + 1 + dL + dM
    cert_depth = 2 * dL + 2 * e + 1 + cfg.lift_margin
    if cfg.precision_exp is None:
        N = max(required + cfg.lift_margin, cert_depth)
    else:
        N = cfg.precision_exp
    return Ls, Ms, N, (required, cert_depth)


def represents_lattice(L, M, cfg: OracleConfig) -> OracleResult:
    """Decide whether the lattice with Gram L is represented by the lattice
    with Gram M over Z_p.  Returns yes/no (with a witness on yes), or
    undecided when the configured precision is below the enforced bound."""
    if len(L) > len(M):
        return OracleResult("no", cfg.precision_exp or 0)
    Ls, Ms, N, (required, cert_depth) = _prepare(L, M, cfg)
    if N < required:
        return OracleResult("undecided", N)
    depth = min(N, cert_depth)
    search = _Search(Ls, Ms, cfg.p, depth, cfg.node_budget)
    found = search.run()
    if found is None:
        return OracleResult("no", N)
    witness = tuple(tuple(col) for col in found)
    return OracleResult("yes", N, witness)


def represents_value(M, a, cfg: OracleConfig) -> OracleResult:
    """Decide whether the lattice with Gram M represents the value a."""
    a = Fraction(a)
    if a == 0:
        raise OracleError("zero target value")
    return represents_lattice([[a]], M, cfg)


def maximality_scan(L, p: int, cfg: OracleConfig | None = None) -> bool:
    """Whether no index-p overlattice of the lattice with Gram L has
    integral norm.

    Every such overlattice is L + (z/p)O for some z in L \\ pL, and its
    norm is integral iff Q(z/p) and all the cross terms 2B(z/p, e_i) are
    integral; both conditions depend on z only modulo p^2, so the scan
    over lifted cosets is exhaustive."""
    G = _to_frac_matrix(L)
    n = len(G)

    def q(vec):
        return sum(vec[i] * G[i][j] * vec[j] for i in range(n) for j in range(n))

    for c in itertools.product(range(p), repeat=n):
        if all(x == 0 for x in c):
            continue
        for t in itertools.product(range(p * p), repeat=n):
            z = [c[i] + p * t[i] for i in range(n)]
            qz = q(z)
            if qz != 0 and val_unit(qz, p)[0] < 2:
                continue
            cross = [2 * sum(G[i][j] * z[j] for j in range(n))
                     for i in range(n)]
            if all(x == 0 or val_unit(x, p)[0] >= 1 for x in cross):
                return False
    return True
