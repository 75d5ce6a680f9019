"""Command-line surface: JSON verdicts for the local decision procedures,
the quadratic-field atlas (CSV and optional figure), a raw oracle query
command, and a self-verification suite.

Exit codes: 0 success, 1 verified inconsistency / failed check, 2 input
error.  Every boolean in the JSON output carries a `criterion` label
naming the clause or oracle run that decided it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .local_arith import (Place, delta, hilbert_symbol, quadratic_defect,
                          relevant_places)
from .quad_space import (enumerate_spaces, hyperbolic_plane, inv_of_diagonal,
                         is_isotropic, orthogonal_sum, space_k_universal)
from .nondyadic_lattice import (JordanLatticeND, diagonal_model, format_jordan,
                                gram_of as nd_gram, is_k_universal,
                                k_universal_criterion_label,
                                maximal_binary_anisotropic, parse_jordan,
                                testing_failures, testing_set)
from .dyadic_lattice import (classic_quaternary_witness, dlat, format_blocks,
                             gram_of as dy_gram, is_2_universal_quaternary,
                             lemma41_check, lemma44_nonrepresentation,
                             parse_blocks, scale_norm, space_of,
                             testing_set_2_universal, two_universal_failures,
                             two_universal_quaternary)
from .quad_field import (admits_2_lng, admits_classic_1_lng, atlas,
                         class_number_even, no_classic_ternary_lng_table,
                         profile, unramified_quadratic_extensions)
from .rep_oracle import OracleConfig, represents_lattice

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


def _threads() -> int | None:
    raw = os.environ.get("QLAT_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"QLAT_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def _emit(payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _parse_rats(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational list {text!r}") from exc


def _parse_gram(text: str) -> list[list[Fraction]]:
    rows = [_parse_rats(row) for row in text.split(";")]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise InputError("Gram matrix must be symmetric")
    return rows


def _space_payload(V) -> dict:
    if V.place.is_real:
        return {"dim": V.dim, "signature": [V.pos, V.neg]}
    return {"dim": V.dim, "det_class": V.det.representative(),
            "hasse": V.hasse}


def _space_criterion(V, k: int) -> str:
    if V.place.is_real:
        return "real-signature-min>=k" if min(V.pos, V.neg) >= k \
            else "real-signature-deficient"
    if V.dim >= k + 3:
        return "dim>=k+3"
    if k == 1 and V.dim in (2, 3) and is_isotropic(V):
        return "low-dim-isotropic"
    HH = orthogonal_sum(hyperbolic_plane(V.place), hyperbolic_plane(V.place))
    if k == 2 and V == HH:
        return "hyperbolic-plane-pair"
    return "no-clause-applies"


def cmd_local_space(args) -> int:
    v = Place.real() if args.real else Place.finite(args.p)
    diag = _parse_rats(args.diag)
    V = inv_of_diagonal(diag, v)
    universal = space_k_universal(V, args.k)
    _emit({"command": "local-space", "place": repr(v), "diag": diag,
           "k": args.k, "space": _space_payload(V),
           "isotropic": is_isotropic(V) if not v.is_real else
           (V.pos >= 1 and V.neg >= 1),
           "k_universal": {"value": universal,
                           "criterion": _space_criterion(V, args.k)}})
    return 0


def cmd_local_lattice(args) -> int:
    if args.p == 2:
        if args.blocks is None:
            raise InputError("p=2 needs --blocks")
        L = parse_blocks(args.blocks)
        if args.k != 2 or L.rank != 4:
            raise InputError(
                "dyadic criterion covers 2-universality of quaternary "
                f"lattices only (got k={args.k}, rank={L.rank})")
        value = is_2_universal_quaternary(L)
        payload = {"command": "local-lattice", "p": 2,
                   "blocks": format_blocks(L), "k": 2,
                   "scale_norm": list(scale_norm(L)),
                   "space": _space_payload(space_of(L)),
                   "k_universal": {"value": value,
                                   "criterion": "half-hyperbolic-pair-"
                                                "characterization"}}
        if args.oracle:
            fails = two_universal_failures(L)
            payload["oracle_cross_check"] = {
                "value": not fails,
                "criterion": "dyadic-testing-set-oracle",
                "failures": [format_blocks(T) for T in fails]}
            if bool(value) != (not fails):
                _emit(payload)
                return 1
        _emit(payload)
        return 0
    if args.jordan is not None:
        L = parse_jordan(args.jordan, args.p)
    elif args.gram is not None:
        from .nondyadic_lattice import jordan_from_gram
        L = jordan_from_gram(_parse_gram(args.gram), args.p)
    else:
        raise InputError("odd p needs --jordan or --gram")
    payload = {"command": "local-lattice", "p": args.p,
               "jordan": format_jordan(L), "k": args.k}
    if args.k >= 2:
        value = is_k_universal(L, args.k)
        payload["k_universal"] = {
            "value": value, "criterion": k_universal_criterion_label(L, args.k)}
    if args.k == 1 or args.oracle:
        fails = testing_failures(L, args.k)
        payload["oracle_cross_check" if args.k >= 2 else "k_universal"] = {
            "value": not fails, "criterion": "testing-set-oracle",
            "failures": [format_jordan(T) for T in fails]}
        if args.k >= 2 and bool(payload["k_universal"]["value"]) != (not fails):
            _emit(payload)
            return 1
    _emit(payload)
    return 0


def cmd_testing_set(args) -> int:
    if args.p == 2:
        if args.k != 2:
            raise InputError("dyadic testing sets exist for k=2 only")
        members = [{"blocks": format_blocks(L),
                    "space": _space_payload(space_of(L))}
                   for L in testing_set_2_universal(1)]
    else:
        members = [{"jordan": format_jordan(L),
                    "diag": [str(a) for a in diagonal_model(L)]}
                   for L in testing_set(args.p, args.k)]
    _emit({"command": "testing-set", "p": args.p, "k": args.k,
           "count": len(members), "members": members})
    return 0


def cmd_maximal_binary(args) -> int:
    if args.p == 2:
        members = [{"blocks": format_blocks(L),
                    "scale_norm": list(scale_norm(L)),
                    "space": _space_payload(space_of(L))}
                   for L in testing_set_2_universal(1)]
        _emit({"command": "maximal-binary", "p": 2, "count": len(members),
               "members": members})
        return 0
    L = maximal_binary_anisotropic(args.p)
    from .nondyadic_lattice import space_of as nd_space
    _emit({"command": "maximal-binary", "p": args.p,
           "jordan": format_jordan(L),
           "diag": [str(a) for a in diagonal_model(L)],
           "space": _space_payload(nd_space(L)),
           "anisotropic": {"value": not is_isotropic(nd_space(L)),
                           "criterion": "binary-det-not-minus-one"}})
    return 0


def cmd_oracle(args) -> int:
    target = _parse_gram(args.target)
    into = _parse_gram(args.into)
    cfg = OracleConfig(args.p, precision_exp=args.precision)
    res = represents_lattice(target, into, cfg)
    _emit({"command": "oracle", "p": args.p,
           "verdict": res.verdict,
           "criterion": f"oracle@{args.p}^{res.precision}",
           "precision_exp": res.precision,
           "witness": [[str(x) for x in col] for col in res.witness]
           if res.witness else None})
    return 0


def cmd_quadfield(args) -> int:
    P = profile(args.m)
    exts = unramified_quadratic_extensions(P)
    payload = {"command": "quadfield", "m": P.m, "d_F": P.d_F,
               "real": P.is_real, "dyadic": P.dyadic_behavior,
               "odd_ramified": list(P.odd_ramified),
               "p_stars": list(P.p_stars),
               "extensions": exts,
               "h_even": {"value": class_number_even(P),
                          "criterion": "genus-field-exceeds-F"},
               "lng2": {"value": admits_2_lng(P),
                        "criterion": "even-class-number",
                        "genus": "2^-1 A(0,0) + 2^-1 A(0,0)"},
               "lng1": {"value": admits_classic_1_lng(P),
                        "criterion": "unramified-extension-split-at-2"},
               "lng1_table": {"value": not no_classic_ternary_lng_table(P),
                              "criterion": "congruence-table"}}
    _emit(payload)
    if payload["lng1"]["value"] != payload["lng1_table"]["value"]:
        return 1
    return 0


def _write_atlas_plot(rows, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(10, 3.2))
    labels = [("h even", lambda r: r.h_even),
              ("2-LNG", lambda r: r.lng2),
              ("classic 1-LNG", lambda r: r.lng1_first_principles)]
    for y, (name, pick) in enumerate(labels):
        xs = [r.m for r in rows if pick(r)]
        ax.scatter(xs, [y] * len(xs), s=8, marker="|")
    ax.set_yticks(range(len(labels)), [name for name, _ in labels])
    ax.set_xlabel("radicand m")
    ax.set_title("quadratic fields Q(sqrt(m))")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_atlas(args) -> int:
    rows = atlas(args.max)
    header = ["m", "d_F", "real", "ramified_primes", "extensions", "h_even",
              "lng2", "lng1_first_principles", "lng1_table", "consistent"]

    def as_record(r):
        return [r.m, r.d_F, r.is_real,
                " ".join(map(str, r.odd_ramified)),
                " ".join(map(str, r.extensions)),
                r.h_even, r.lng2, r.lng1_first_principles, r.lng1_table,
                r.consistent]

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow(as_record(r))
    else:
        print(",".join(header))
        for r in rows:
            print(",".join(str(x) for x in as_record(r)))
    if args.plot:
        _write_atlas_plot(rows, args.plot)
    bad = [r.m for r in rows if not r.consistent]
    if args.check_table:
        print(f"# checked {len(rows)} fields, "
              f"{'all consistent' if not bad else f'INCONSISTENT at {bad}'}",
              file=sys.stderr)
        return 1 if bad else 0
    return 0


def _verify_checks(seed: int):
    """One (name, callable) per verified fact; callables raise or return
    falsy on failure."""
    rng = random.Random(seed)
    P2 = Place.finite(2)

    def hilbert_product_formula():
        for _ in range(500):
            a = Fraction(rng.randint(-60, 60) or 1, rng.randint(1, 30))
            b = Fraction(rng.randint(-60, 60) or 1, rng.randint(1, 30))
            prod = 1
            for v in relevant_places(a, b):
                prod *= hilbert_symbol(a, b, v)
            if prod != 1:
                return False
        return True

    def minimality_witnesses():
        for p in (3, 5):
            D = delta(p)
            wit = [[D, -p, D * p], [1, p, -D * p], [-1, D, D * p], [1, -D, p]]
            expected = [[1], [D], [p], [D * p]]
            for entries, want in zip(wit, expected):
                from .nondyadic_lattice import jordan_from_gram
                n = len(entries)
                L = jordan_from_gram(
                    [[entries[i] if i == j else 0 for j in range(n)]
                     for i in range(n)], p)
                fails = testing_failures(L, 1)
                if [diagonal_model(t) for t in fails] != [want]:
                    return False
        return True

    def dyadic_space_bijection():
        lats = testing_set_2_universal(1)
        spaces = {(space_of(L).det.vbit, space_of(L).det.u, space_of(L).hasse)
                  for L in lats}
        return len(lats) == 15 and len(spaces) == 15 \
            and len(enumerate_spaces(2, P2)) == 15

    def quaternary_criterion():
        good = two_universal_quaternary()
        bad = dlat(("d", 1), ("d", -1), ("d", 1), ("d", -1))
        return is_2_universal_quaternary(good) \
            and not is_2_universal_quaternary(bad)

    def lemma44_instance():
        M = dlat(("p", Fraction(1, 2), 0, 0), ("d", 2), ("d", 2))
        target = dlat(("p", Fraction(1, 2), 2, -2))
        res = represents_lattice(dy_gram(target), dy_gram(M),
                                 OracleConfig(2, precision_exp=7))
        return lemma44_nonrepresentation(dlat(("d", 2), ("d", 2))) \
            and res.verdict == "no"

    def classic_quaternary_fails():
        w = classic_quaternary_witness(
            dlat(("d", 1), ("d", -1), ("d", 1), ("d", -1)))
        return w is not None

    def quadfield_examples():
        fix = {-14: (True, True, True), -5: (True, True, False),
               -1: (False, False, False), 2: (False, False, False),
               -2: (False, False, False)}
        for m, (he, l2, l1) in fix.items():
            P = profile(m)
            if (class_number_even(P), admits_2_lng(P),
                    admits_classic_1_lng(P)) != (he, l2, l1):
                return False
        return unramified_quadratic_extensions(profile(-14)) == [-7]

    return [
        ("unit-5-defect-is-4Z2",
         lambda: quadratic_defect(5, 2).exponent == 2),
        ("nonresidue-defect-is-unit-ideal-odd-p",
         lambda: all(quadratic_defect(delta(p), p).exponent == 0
                     for p in (3, 5, 7, 11))),
        ("hilbert-product-formula-500-random", hilbert_product_formula),
        ("binary-space-counts-7-and-15",
         lambda: len(enumerate_spaces(2, Place.finite(3))) == 7
         and len(enumerate_spaces(2, P2)) == 15),
        ("nondyadic-testing-set-sizes-4-7-8",
         lambda: [len(testing_set(3, k)) for k in (1, 2, 3, 5)] == [4, 7, 8, 8]),
        ("k1-minimality-witnesses-p3-p5", minimality_witnesses),
        ("nondyadic-criterion-spot-checks",
         lambda: is_k_universal(JordanLatticeND(3, ((0, 5, 0),)), 2)
         and is_k_universal(JordanLatticeND(3, ((0, 3, 0), (1, 2, 0))), 2)
         and not is_k_universal(JordanLatticeND(3, ((0, 3, 0), (2, 2, 0))), 2)
         and not is_k_universal(JordanLatticeND(3, ((0, 4, 1),)), 2)),
        ("neighbor-unit-hilbert-symbol-all-sigma",
         lambda: all(lemma41_check(1, s) == -1 for s in (1, 3, 5, 7))),
        ("dyadic-testing-set-15-space-bijection", dyadic_space_bijection),
        ("quaternary-2-universal-characterization", quaternary_criterion),
        ("scaled-hyperbolic-plus-even-part-misses-anisotropic-binary",
         lemma44_instance),
        ("no-classic-2-universal-quaternary-witness", classic_quaternary_fails),
        ("quadratic-field-fixtures", quadfield_examples),
        ("atlas-consistency-100",
         lambda: all(r.consistent for r in atlas(100))),
    ]


def cmd_verify_paper(args) -> int:
    failures = 0
    for name, check in _verify_checks(args.seed):
        try:
            ok = bool(check())
        except Exception as exc:  # report, keep going
            ok = False
            print(f"FAIL {name}: {exc}")
            failures += 1
            continue
        print(("ok   " if ok else "FAIL ") + name)
        failures += 0 if ok else 1
    print(f"{'all checks passed' if not failures else f'{failures} failed'}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qlat",
        description="k-universality of p-adic quadratic lattices and "
                    "locally-but-not-globally universal lattices over "
                    "quadratic fields")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("local-space", help="space invariants + k-universality")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--real", action="store_true")
    sp.add_argument("--diag", required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(fn=cmd_local_space)

    sp = sub.add_parser("local-lattice", help="lattice k-universality")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--jordan")
    sp.add_argument("--gram")
    sp.add_argument("--blocks")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check the criterion with the search oracle")
    sp.set_defaults(fn=cmd_local_lattice)

    sp = sub.add_parser("testing-set", help="minimal testing set")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(fn=cmd_testing_set)

    sp = sub.add_parser("maximal-binary", help="binary maximal lattices")
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(fn=cmd_maximal_binary)

    sp = sub.add_parser("oracle", help="raw representation query")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--target", required=True,
                    help="Gram matrix, rows ; separated, entries , separated")
    sp.add_argument("--into", required=True)
    sp.add_argument("--precision", type=int)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("quadfield", help="quadratic field profile")
    sp.add_argument("-m", type=int, required=True)
    sp.set_defaults(fn=cmd_quadfield)

    sp = sub.add_parser("atlas", help="sweep of quadratic fields")
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--csv")
    sp.add_argument("--plot")
    sp.add_argument("--check-table", action="store_true")
    sp.set_defaults(fn=cmd_atlas)

    sp = sub.add_parser("verify-paper", help="run the verification suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _threads()  # validate the environment before doing any work
        return args.fn(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
