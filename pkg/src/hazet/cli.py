"""Command-line interface: ``hazet <verb> ...``.

Every verb prints deterministic output and returns exit code 0 exactly when
all of its checks pass.  Failing checks name the first identity that failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import catalogue, coxeter, golden
from .algebra import dumps, format_poly, modular_identity_test, monomial_poly, series_equal
from .arrangement import Arrangement, read_arrangement
from .flagseries import (
    analytic_zeta,
    atom_specialization,
    cfhp,
    eulerian_coarse,
    fhp,
    format_numerator,
    format_numerator_latex,
    random_subset_checks,
    reciprocity_check,
    s_name,
    sr_hilbert_check,
    stratified_zeta,
)
from .poset import IntersectionPoset, element_for_atoms
from .topzeta import epsilon_constant_term, form_latex, s_by_name, top_zeta_central, top_zeta_multivariate, top_zeta_univariate


class CheckFailed(Exception):
    """A verification failed; the message names the identity."""


# -- target resolution ------------------------------------------------------------


def load_target(name: str) -> tuple[Arrangement | None, IntersectionPoset]:
    """A catalogue name or a path to an arrangement file."""
    path = Path(name)
    if path.is_file():
        arr = read_arrangement(path)
        return arr, catalogue.as_poset(arr)
    obj = catalogue.by_name(name)
    if isinstance(obj, IntersectionPoset):
        return None, obj
    return obj, catalogue.poset_by_name(name)


_KEY_ATOMS = re.compile(r"(?:s)?\[([\d,\s]+)\]")


def parse_exponents(text: str, P: IntersectionPoset) -> dict[int, Fraction]:
    """Parse ``key=value,...`` into exponents on poset elements.

    Keys are ``x<k>`` (element index ``k`` as printed by ``hazet fhp --elements``),
    ``top``, or ``[i,j,...]`` / ``s[i,j,...]`` naming the flat spanned by the
    listed hyperplanes (1-based).  Bracketed keys may contain commas, so pairs
    are split on commas outside brackets.
    """
    out: dict[int, Fraction] = {}
    if not text.strip():
        return out
    pairs, depth, current = [], 0, ""
    for ch in text:
        depth += ch == "["
        depth -= ch == "]"
        if ch == "," and depth == 0:
            pairs.append(current)
            current = ""
        else:
            current += ch
    pairs.append(current)
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"expected key=value, got {pair!r}")
        key, value = (part.strip() for part in pair.split("=", 1))
        if key == "top":
            if not P.is_central:
                raise ValueError("'top' needs a central arrangement")
            x = P.top
        elif re.fullmatch(r"x\d+", key):
            x = int(key[1:])
            if not 0 < x < len(P):
                raise ValueError(f"no poset element {key}")
        elif _KEY_ATOMS.fullmatch(key):
            hyperplanes = [int(v) - 1 for v in _KEY_ATOMS.fullmatch(key).group(1).split(",")]
            if any(not 0 <= h < P.n_hyperplanes for h in hyperplanes):
                raise ValueError(f"hyperplane index out of range in {key}")
            x = element_for_atoms(P, hyperplanes)
        else:
            raise ValueError(f"unrecognised exponent key {key!r}")
        out[x] = out.get(x, Fraction(0)) + Fraction(value)
    return out


def _emit(data: dict) -> None:
    print(json.dumps(data, sort_keys=True, indent=2))


def _threads(requested: int | None) -> int:
    if requested:
        return requested
    env = os.environ.get("HAZET_THREADS")
    return int(env) if env else 1


# -- verbs --------------------------------------------------------------------------


def cmd_catalogue(args: argparse.Namespace) -> int:
    if args.name is None:
        for line in catalogue.list_families():
            print(line)
        return 0
    arr, P = load_target(args.name)
    print(f"name: {args.name}")
    print(f"central: {P.is_central}")
    print(f"rank: {P.rank}")
    print(f"hyperplanes: {P.n_hyperplanes}")
    print(f"flats by rank: {P.rank_counts()}")
    print(f"poincare: {P.poincare_coeffs(0)}")
    if arr is not None:
        print(f"field: {arr.field}")
    return 0


def cmd_fhp(args: argparse.Namespace) -> int:
    _, P = load_target(args.name)
    if args.elements:
        for x in P.ground():
            print(f"x{x}\t{P.label(x)}\t{s_name(P, x)}")
        return 0
    F = fhp(P)
    if args.json:
        _emit({"name": args.name, "series": json.loads(dumps(F.series))})
    elif args.latex:
        print(format_numerator_latex(cfhp(P).numerator))
    else:
        for key, num in F.series.terms.items():
            gps = "".join(f" gp({format_poly(monomial_poly(m))})" for m in key)
            print(f"({num}){gps}")
    return 0


def cmd_coarse(args: argparse.Namespace) -> int:
    _, P = load_target(args.name)
    C = cfhp(P)
    if args.json:
        _emit(
            {
                "name": args.name,
                "rank": C.rank,
                "numerator": json.loads(dumps(C.numerator)),
                "table": [[str(c) for c in row] for row in C.coefficient_table()],
            }
        )
        return 0
    text = format_numerator_latex(C.numerator) if args.latex else format_numerator(C.numerator, True)
    if args.numerator:
        print(text)
    else:
        print(f"({text})/(1-T)^{C.rank}")
    return 0


def cmd_topzeta(args: argparse.Namespace) -> int:
    _, P = load_target(args.name)
    if args.univariate:
        Z = top_zeta_univariate(P)
        if args.json:
            _emit({"name": args.name, "numerator": list(Z.numerator), "denominator": list(Z.denominator)})
        elif args.latex:
            print(Z.latex())
        else:
            print(Z)
        return 0
    total = top_zeta_multivariate(P)
    if args.json:
        terms = [
            {"coefficient": str(c), "forms": [{"constant": f[0], "s": list(f[1])} for f in key]}
            for key, c in sorted(total.terms.items())
        ]
        _emit({"name": args.name, "terms": terms})
    elif args.central and P.is_central and P.rank:
        g_top, inner = top_zeta_central(P)
        if args.latex:
            print(f"\\frac{{1}}{{{form_latex(g_top)}}}\\left({inner.latex()}\\right)")
        else:
            print(f"({inner}) / ({' + '.join([str(g_top[0]), *g_top[1]])})")
    elif args.latex:
        print(total.latex())
    else:
        print(total)
    return 0


def _atom_routes(kind: str, n: int, via: str):
    trees = coxeter.atom_zeta_total_partitions(kind, n).series if via in ("trees", "both") else None
    flags = atom_specialization(fhp(coxeter.coxeter_poset(kind, n))) if via in ("fhp", "both") else None
    return trees, flags


def cmd_atom(args: argparse.Namespace) -> int:
    kind, n = args.type.upper(), args.rank
    trees, flags = _atom_routes(kind, n, args.via)
    if args.via == "both":
        if len(trees.terms) + len(flags.terms) < 400:
            same = series_equal(trees, flags)
            how = "exact normalization"
        else:
            test = modular_identity_test(trees, flags)
            same = test.holds
            how = f"modular identity test, failure bound {float(test.failure_bound):.1e}"
        print(f"{kind}{n}: tree route {'equals' if same else 'differs from'} flag route ({how})")
        return 0 if same else 1
    series = trees if trees is not None else flags
    if args.json:
        _emit({"type": kind, "rank": n, "via": args.via, "series": json.loads(dumps(series))})
    else:
        print(repr(series))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    arr, P = load_target(args.name)
    s = parse_exponents(args.s, P)
    value = analytic_zeta(P, Fraction(args.q), s, arrangement=arr)
    if isinstance(value, Fraction):
        print(value)
    else:
        print(repr(value))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    from .oracle import brute_force_zeta, closed_form_value

    arr, P = load_target(args.name)
    if arr is None:
        raise ValueError(f"{args.name} has no coordinates; the oracle needs an arrangement")
    s = parse_exponents(args.s, P)
    if any(v.denominator != 1 for v in s.values()):
        raise ValueError("the oracle needs integer exponents")
    exps = {x: int(v) for x, v in s.items()}
    result = brute_force_zeta(arr, args.prime, args.level, exps, poset=P)
    exact = closed_form_value(P, args.prime, exps)
    ok = result.contains(exact)
    if args.report == "json":
        data = result.to_json()
        data["closed_form"] = str(exact)
        data["within_bound"] = ok
        _emit(data)
    else:
        print(f"oracle value   {result.value} (~{float(result.value):.10f})")
        print(f"error bound    {result.error_bound}")
        print(f"closed form    {exact} (~{float(exact):.10f})")
        print(f"within bound   {ok}")
    return 0 if ok else 1


def _check_reciprocity(P: IntersectionPoset) -> None:
    report = reciprocity_check(P)
    if not report.holds:
        raise CheckFailed(f"self-reciprocity of fHP fails at {report.witness}")


def _check_subsets(P: IntersectionPoset) -> None:
    results = random_subset_checks(P, count=20)
    if not all(results):
        raise CheckFailed(f"subset-complement identity fails for random subset #{results.index(False)}")


def _check_sr(P: IntersectionPoset) -> None:
    if not sr_hilbert_check(P):
        raise CheckFailed("Stanley-Reisner check of N(Y,0) and N(0,T) fails")


def _check_strata(P: IntersectionPoset) -> None:
    rng = random.Random(0)
    for q in (3, 7):
        s = {x: rng.randint(0, 2) for x in P.ground()}
        if analytic_zeta(P, q, s) != stratified_zeta(P, q, s):
            raise CheckFailed(f"stratified zeta differs from the flag formula at q = {q}")


def _check_topzeta(P: IntersectionPoset) -> None:
    rng = random.Random(0)
    total = top_zeta_multivariate(P)
    for _ in range(3):
        s = {x: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for x in P.ground()}
        if total.evaluate(s_by_name(P, s)) != epsilon_constant_term(P, s):
            raise CheckFailed("topological zeta differs from the q -> 1 constant term")


def _check_conjecture(P: IntersectionPoset) -> None:
    N = cfhp(P).numerator
    negative = [exp for exp, c in N.terms.items() if c < 0]
    if negative:
        raise CheckFailed(f"coarse numerator has a negative coefficient at exponent {min(negative)}")


CHECKS = {
    "reciprocity": _check_reciprocity,
    "subsets": _check_subsets,
    "sr": _check_sr,
    "strata": _check_strata,
    "topzeta": _check_topzeta,
    "conjecture": _check_conjecture,
}
CENTRAL_ONLY = {"reciprocity", "subsets"}


def cmd_verify(args: argparse.Namespace) -> int:
    _, P = load_target(args.name)
    names = list(CHECKS) if args.check == "all" else [args.check]
    for name in names:
        if name in CENTRAL_ONLY and not P.is_central:
            if args.check == "all":
                print(f"{name}: skipped (not central)")
                continue
            raise ValueError(f"{name} needs a central arrangement")
        try:
            CHECKS[name](P)
        except CheckFailed as exc:
            print(f"{name}: FAIL: {exc}")
            return 1
        print(f"{name}: ok")
    return 0


def cmd_trees(args: argparse.Namespace) -> int:
    kind, n = args.type.upper(), args.rank
    if args.count:
        print(coxeter.count_total_partitions(kind, n))
        return 0
    for tree in coxeter.enumerate_total_partitions(kind, n):
        print(tree)
    return 0


def cmd_stirling(args: argparse.Namespace) -> int:
    kind, n = args.type.upper(), args.rank
    ok = True
    for k in range(1, n + 1):
        got = coxeter.stirling_flag_sum(kind, n, k)
        want = coxeter.stirling2(n, k) * math.factorial(k)
        ok &= got == want
        print(f"k={k}: flag sum {got}, k!S(n,k) {want}")
    P = coxeter.coxeter_poset(kind, n)
    at_one = cfhp(P).at_y(1)
    expected = eulerian_coarse(n).numerator * sum(P.poincare_coeffs(0))
    same = at_one == expected
    print(f"N(1,T) = pi(1) E_n(T): {same}")
    if not ok:
        print("FAIL: flag sums differ from k!S(n,k)")
    return 0 if ok and same else 1



def cmd_golden(args: argparse.Namespace) -> int:
    names = golden.select(args.which, include_slow=args.slow)
    threads = _threads(args.threads)
    if threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(golden.check, names))
    else:
        results = [golden.check(name) for name in names]
    failed = None
    for r in results:
        line = f"{r.name:10s} {'ok' if r.ok else 'FAIL'}"
        if args.timing:
            line += f"  {r.seconds:.2f}s"
        if r.detail:
            line += f"  {r.detail}"
        print(line)
        if not r.ok and failed is None:
            failed = r.name
    if failed is not None:
        print(f"first failing table: {failed}")
        return 1
    return 0


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hazet", description="Flag Hilbert-Poincare series and zeta functions of arrangements.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("catalogue", help="list families or describe one arrangement")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalogue)

    p = sub.add_parser("fhp", help="flag Hilbert-Poincare series")
    p.add_argument("name")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true", help="coarse numerator in appendix layout")
    fmt.add_argument("--elements", action="store_true", help="list poset elements and their names")
    p.set_defaults(func=cmd_fhp)

    p = sub.add_parser("coarse", help="coarse flag series N(Y,T)/(1-T)^rank")
    p.add_argument("name")
    p.add_argument("--numerator", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    p.set_defaults(func=cmd_coarse)

    p = sub.add_parser("topzeta", help="topological zeta function")
    p.add_argument("name")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--univariate", action="store_true")
    mode.add_argument("--multivariate", action="store_true", help="the default")
    p.add_argument("--central", action="store_true", help="factor out the top form")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    p.set_defaults(func=cmd_topzeta)

    p = sub.add_parser("atom", help="atom zeta function of a Coxeter arrangement")
    p.add_argument("--type", required=True, choices=["A", "B", "D", "a", "b", "d"])
    p.add_argument("--rank", required=True, type=int)
    p.add_argument("--via", choices=["trees", "fhp", "both"], default="trees")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_atom)

    p = sub.add_parser("eval", help="evaluate the analytic zeta function")
    p.add_argument("name")
    p.add_argument("--q", required=True)
    p.add_argument("--s", default="", help="exponents, e.g. x1=1,top=2,[1,2]=1")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle", help="brute-force p-adic integral with a certified bound")
    p.add_argument("name")
    p.add_argument("--prime", required=True, type=int)
    p.add_argument("--level", required=True, type=int)
    p.add_argument("--s", default="")
    p.add_argument("--report", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("check", choices=[*CHECKS, "all"])
    p.add_argument("name")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trees", help="total partitions as labeled trees")
    p.add_argument("--type", required=True, choices=["A", "B", "D", "a", "b", "d"])
    p.add_argument("--rank", required=True, type=int)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("stirling", help="flag sums against k!S(n,k) and Eulerian numerators")
    p.add_argument("--type", required=True, choices=["A", "B", "D", "a", "b", "d"])
    p.add_argument("--rank", required=True, type=int)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("golden", help="compare numerators with the bundled tables")
    p.add_argument("which", nargs="?", default="default", help="default, slow, all, or one table name")
    p.add_argument("--slow", action="store_true", help="include slow tables in 'all'")
    p.add_argument("--threads", type=int, default=None, help="worker processes (or HAZET_THREADS)")
    p.add_argument("--timing", action="store_true", help="print seconds per table")
    p.set_defaults(func=cmd_golden)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, RuntimeError, OSError) as exc:
        print(f"hazet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
