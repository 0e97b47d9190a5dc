"""Command-line driver: table generators and verification suites.

Every command is deterministic for a fixed argv; the seed is echoed in the
output. Exit codes: 0 success, 1 a verification claim failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .report import Report

DEFAULT_SEED = 20240501
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _primes(text: str) -> list[int]:
    from .scalar import check_prime

    try:
        ps = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")
    for p in ps:
        try:
            check_prime(p)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
        if p == 2:
            raise argparse.ArgumentTypeError("p must be an odd prime")
    return ps


def _params(items: list[str] | None) -> dict:
    out = {}
    for it in items or []:
        k, sep, v = it.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {it!r}")
        out[k.strip()] = int(v)
    return out


def _frac(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- emitters

def _emit_rows(rows: list[dict], fmt: str, seed: int, title: str) -> str:
    if fmt == "json":
        return json.dumps({"table": title, "seed": seed, "rows": rows}, sort_keys=True, indent=1)
    cols = list(rows[0]) if rows else []
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] for c in cols])
        return buf.getvalue().rstrip("\n")
    buf.write(f"# {title}, seed {seed}\n")
    buf.write("\t".join(cols) + "\n")
    for r in rows:
        buf.write("\t".join(str(r[c]) for c in cols) + "\n")
    return buf.getvalue().rstrip("\n")


def _emit_report(rep: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.to_dict(), sort_keys=True, indent=1, default=str)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "seed", "id", "anchor", "case", "verdict", "witness"])
        for c in rep.claims:
            w.writerow([rep.suite, rep.seed, c.id, c.anchor, c.case or "", c.verdict, c.witness or ""])
        return buf.getvalue().rstrip("\n")
    lines = [f"# {rep.suite}, seed {rep.seed}"]
    for c in rep.claims:
        tail = f"  ({c.witness})" if c.witness else ""
        lines.append(f"{c.verdict:<15} {c.id}  [{c.anchor}]{tail}")
    n_fail = len(rep.failures())
    lines.append(f"# {len(rep.claims)} claims, {n_fail} failed")
    return "\n".join(lines)


# ---------------------------------------------------------------- tables

def cmd_lambda_table(args) -> tuple[str, int]:
    from .coeffs import lambda_closed, lambda_from_mu

    ps = args.p or [3, 5, 7]
    vecs = {}
    for p in ps:
        a, b = lambda_from_mu(p).residues(), lambda_closed(p).residues()
        if a != b:
            return f"lambda routes disagree at p={p}: {a} vs {b}", EXIT_FAIL
        vecs[p] = a
    if args.format == "json":
        body = {"table": "lambda", "seed": args.seed, "p": ps, "lambda": {str(p): vecs[p] for p in ps}}
        return json.dumps(body, sort_keys=True, indent=1), EXIT_OK
    n = max(ps)
    rows = []
    for i in range(n):
        r = {"i": f"lambda_{i}"}
        for p in ps:
            r[f"p={p}"] = vecs[p][i] if i < p else ""
        rows.append(r)
    return _emit_rows(rows, args.format, args.seed, "lambda"), EXIT_OK


def cmd_mu_table(args) -> tuple[str, int]:
    from .coeffs import mu_row, simplified_coefficients

    kmax = args.kmax or 10
    if kmax < 3:
        raise UsageError("--kmax must be at least 3")
    rows = []
    for k in range(3, kmax + 1):
        rows.append({
            "k": k,
            "mu": " ".join(_frac(q) for q in mu_row(k)),
            "simplified": " ".join(_frac(q) for q in simplified_coefficients(k)),
        })
    return _emit_rows(rows, args.format, args.seed, "mu"), EXIT_OK


def cmd_gamma(args) -> tuple[str, int]:
    from .smash import gamma_recursive
    from .superpoly import ParityCase, format_poly

    case = ParityCase.parse(args.case)
    if args.k is None and args.kmax is None:
        raise UsageError("gamma needs --k or --kmax")
    ks = [args.k] if args.k is not None else list(range(1, args.kmax + 1))
    rows = []
    for k in ks:
        if k < 0:
            raise UsageError("--k must be nonnegative")
        js = [args.j] if args.j is not None else list(range(1, k + 1))
        for j in js:
            if k >= 1 and 1 <= j <= k:
                poly = format_poly(gamma_recursive(k, j, case))
            else:
                poly = "0"  # extended by zero outside 1 <= j <= k
            rows.append({"k": k, "j": j, "case": case.name, "polynomial": poly})
    if args.format == "text" and len(rows) == 1:
        return rows[0]["polynomial"], EXIT_OK
    return _emit_rows(rows, args.format, args.seed, "gamma"), EXIT_OK


# ---------------------------------------------------------------- suites

def hochschild_suite(ps: list[int], kmax: int, seed: int, samples: int = 50) -> Report:
    from .coeffs import gamma2_decompose, lambda_closed, lambda_from_mu
    from .lierinehart import builtin, check_hochschild_theorem
    from .smash import check_two_step_identities, gamma_mod_p_vanishing, gamma_oracle, gamma_recursive
    from .superpoly import ALL_CASES, EVEN_ODD

    rep = Report("verify-hochschild", seed=seed)
    for case in ALL_CASES:
        bad = None
        for k in range(1, kmax + 1):
            orc = gamma_oracle(k, case)
            for j in range(1, k + 1):
                if gamma_recursive(k, j, case) != orc.get(j, gamma_recursive(k, j, case).zero(case)):
                    bad = f"k={k}, j={j}"
                    break
            if bad:
                break
        rep.add(f"gamma-oracle[{case.name}]", "smash-gamma-recursion", bad is None, bad, case.name)
    bad = next((f"k={k}, j={j}" for k in range(3, min(kmax, 10) + 1) for j in range(2, k)
                if not check_two_step_identities(k, j, EVEN_ODD)), None)
    rep.add("two-step[even/odd]", "Gamma-two-step", bad is None, bad, "even/odd")
    bad = next((f"k={k}" for k in range(3, kmax + 1) if not gamma2_decompose(k).holds), None)
    rep.add("mu-decomposition", "Gamma-k-2-mu", bad is None, bad)
    for p in ps:
        a, b = lambda_from_mu(p).residues(), lambda_closed(p).residues()
        rep.add(f"lambda-routes[p={p}]", "lambda-closed", a == b, f"{a} vs {b}")
        v = gamma_mod_p_vanishing(p)
        wit = "; ".join(f"j={j}: {w}" for j, w in sorted(v.witnesses.items()))
        rep.add(f"vanishing[p={p}]", "p-divides", v.all_vanish, wit)
        b2 = builtin("witt", p, {"n": 2})
        rep.extend(check_hochschild_theorem(b2.data, b2.rep, samples=samples, seed=seed), f"witt(2),p={p}:")
    return rep


def lr_suite(ps: list[int], seed: int, bundles=None, samples: int = 50) -> Report:
    from .algebra import PMap, check_restricted, jacobson_solve
    from .lierinehart import builtin, check_lr, check_restricted_lr, check_representation

    rep = Report("verify-lr", seed=seed)
    if bundles is None:
        bundles = []
        for p in ps:
            bundles.append((f"derivations,p={p}", builtin("derivations", p)))
            bundles.append((f"witt(2),p={p}", builtin("witt", p, {"n": 2})))
            if p == 3:
                bundles.append((f"witt(3),p={p}", builtin("witt", p, {"n": 3})))
            bundles.append((f"example-2-1,p={p}", builtin("example-2-1", p)))
            bundles.append((f"example-2-2,p={p}", builtin("example-2-2", p)))
    for label, b in bundles:
        rep.extend(check_lr(b.data), f"{label}:")
        rep.extend(check_restricted_lr(b.data, samples=samples, seed=seed), f"{label}:")
        if b.rep is not None:
            rep.extend(check_representation(b.data, b.rep, samples=samples, seed=seed), f"{label}:module:")
        if label.startswith("example-2-1"):
            L, p = b.data.L, b.data.p
            sol = jacobson_solve(L)
            line = np.array([1, 1, 0]) % p
            ok = True
            for t in range(p):
                member = {0: (sol.images[0] + t * line) % p, 1: (sol.images[1] + t * line) % p}
                ok &= bool(np.array_equal(member[0], np.array([1 + t, t, 0]) % p))
                ok &= bool(np.array_equal(member[1], np.array([-1 + t, t, 0]) % p))
                ok &= check_restricted(L, PMap(p, member, sol.center), samples=20, seed=seed).ok
            cen = [tuple(int(c) for c in r) for r in sol.center]
            ok &= cen == [(1, 1, 0)]
            # the bundle's own p-map must sit on the same line
            given = L.pmap.images
            al = int(given[0][1])
            ok &= all(np.array_equal(given[j] % p, (sol.images[j] + al * line) % p) for j in (0, 1))
            rep.add(f"{label}:jacobson-family", "ex-2-1-pmap", ok, f"particular {[L.format(v) for v in sol.images.values()]}, center {cen}")
    return rep


def _even_vector(V, rng):
    v = rng.integers(0, V.p, V.dim)
    v[V.parities == 1] = 0
    return v


def semidirect_suite(ps: list[int], seed: int, trials: int = 100) -> Report:
    from .lierinehart import (build_semidirect, builtin, general_linear, ideal_module,
                              semidirect_lemma1, semidirect_lemma2, semidirect_lemma2_p)

    rep = Report("verify-semidirect", seed=seed)
    for p in ps:
        for m, n in ((1, 1), (2, 1)):
            if p > 3 and (m, n) != (1, 1):
                continue
            L, V = general_linear(m, n, p)
            rng = np.random.default_rng([seed, p, m, n])
            bad = {"lemma1": None, "lemma2": None, "lemma2-p": None}
            for t in range(trials):
                x, y = L.random_homogeneous(rng, 0), L.random_homogeneous(rng, int(rng.integers(2)))
                v, w = _even_vector(V, rng), _even_vector(V, rng)
                k = int(rng.integers(1, p + 1))
                if bad["lemma1"] is None and not semidirect_lemma1(L, V, x, y, k):
                    bad["lemma1"] = f"trial {t}, n={k}"
                if bad["lemma2"] is None and not semidirect_lemma2(L, V, x, v, y, w, k):
                    bad["lemma2"] = f"trial {t}, n={k}"
                if bad["lemma2-p"] is None and not semidirect_lemma2_p(L, V, x, v, y, w):
                    bad["lemma2-p"] = f"trial {t}"
            tag = f"gl({m}|{n}),p={p}"
            rep.add(f"{tag}:lemma1", "semidirectlem1", bad["lemma1"] is None, bad["lemma1"])
            rep.add(f"{tag}:lemma2", "semidirectlem2", bad["lemma2"] is None, bad["lemma2"])
            rep.add(f"{tag}:lemma2-p", "semidirectlem2", bad["lemma2-p"] is None, bad["lemma2-p"])
        b = builtin("example-2-2", p)
        res = build_semidirect(b.data, ideal_module(b.data, ["e2"]), samples=50, seed=seed)
        rep.extend(res.report, f"example-2-2#e2,p={p}:")
        b = builtin("example-2-1", p)
        res = build_semidirect(b.data, ideal_module(b.data, ["e2"]), samples=50, seed=seed)
        rep.extend(res.report, f"example-2-1#e2,p={p}:")
        if p == 3:
            b = builtin("witt", p, {"n": 2})
            res = build_semidirect(b.data, b.rep, samples=50, seed=seed)
            rep.extend(res.report, f"witt(2)#Lambda(2),p={p}:")
    return rep


def _load_bundle(path: str):
    from .lierinehart import Bundle, bundle_from_json

    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")
    data, rep = bundle_from_json(obj)
    return Bundle(data, rep, {})


def cmd_verify(args) -> tuple[str, int]:
    from .shapes import verify_appendix_bundle

    seed = args.seed
    if args.command == "verify-appendix":
        rmax = args.rmax or 7
        if rmax < 2:
            raise UsageError("--rmax must be at least 2")
        if rmax > 9 and not args.force:
            raise UsageError("--rmax above 9 is slow; pass --force to override")
        rep = verify_appendix_bundle(rmax, args.p or [3, 5])
        rep.seed = seed
    elif args.command == "verify-hochschild":
        kmax = args.kmax or 14
        if kmax > 16 and not args.force:
            raise UsageError("--kmax above 16 is slow; pass --force to override")
        rep = hochschild_suite(args.p or [3, 5], kmax, seed)
    elif args.command == "verify-lr":
        bundles = None
        if args.input:
            b = _load_bundle(args.input)
            bundles = [(b.data.name or "input", b)]
        elif args.example:
            from .lierinehart import builtin

            bundles = [(f"{args.example},p={p}", builtin(args.example, p, _params(args.param)))
                       for p in (args.p or [3])]
        rep = lr_suite(args.p or [3, 5], seed, bundles)
    else:
        rep = semidirect_suite(args.p or [3], seed)
    return _emit_report(rep, args.format), EXIT_OK if rep.ok else EXIT_FAIL


def cmd_pbw(args) -> tuple[str, int]:
    from .envelope import confluence_sample, envelope_for, lr_enveloping_algebra, multiplication_table
    from .lierinehart import builtin

    if args.input:
        b = _load_bundle(args.input)
        U = lr_enveloping_algebra(b.data)
    else:
        b = builtin(args.example or "example-2-1", (args.p or [3])[0], _params(args.param))
        U = envelope_for(b)
    env = U.env
    if args.action == "nf":
        if not args.word:
            raise UsageError("pbw nf needs --word")
        try:
            text = env.format(env.nf(args.word))
        except KeyError as e:
            raise UsageError(f"unknown letter {e}")
        if args.format == "json":
            return json.dumps({"seed": args.seed, "word": args.word, "normal_form": text}, indent=1), EXIT_OK
        return text, EXIT_OK
    if args.action == "dim":
        body = {"seed": args.seed, "dim": env.dim, "route": U.route}
        if args.format == "json":
            return json.dumps(body, sort_keys=True, indent=1), EXIT_OK
        return f"{env.dim}", EXIT_OK
    rep = Report("pbw-confluence", seed=args.seed)
    rep.extend(confluence_sample(env, n_words=args.words, seed=args.seed))
    rep.extend(multiplication_table(env))
    return _emit_report(rep, args.format), EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_primes, help="comma-separated odd primes")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--force", action="store_true", help="allow bounds beyond the safe range")

    ap = argparse.ArgumentParser(prog="superlr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("lambda-table", parents=[common], help="reduced lambda coefficients mod p")
    s = sub.add_parser("mu-table", parents=[common], help="mu_{k,i} rows")
    s.add_argument("--kmax", type=int)
    s = sub.add_parser("gamma", parents=[common], help="Gamma_{k,j} polynomials")
    s.add_argument("--k", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--kmax", type=int)
    s.add_argument("--case", default="even/odd")
    s = sub.add_parser("verify-hochschild", parents=[common], help="Gamma, mu and lambda checks plus the operator identity")
    s.add_argument("--kmax", type=int)
    s = sub.add_parser("verify-appendix", parents=[common], help="shape polynomials P_lambda and Q_lambda")
    s.add_argument("--rmax", type=int)
    blurbs = {"verify-lr": "restricted Lie-Rinehart axioms on bundles",
              "verify-semidirect": "semi-direct product lemmas and construction"}
    for name in ("verify-lr", "verify-semidirect"):
        s = sub.add_parser(name, parents=[common], help=blurbs[name])
        s.add_argument("--input")
        s.add_argument("--example")
        s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s = sub.add_parser("pbw", parents=[common], help="PBW normal forms")
    s.add_argument("action", choices=("nf", "dim", "confluence"))
    s.add_argument("--input")
    s.add_argument("--example")
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--word")
    s.add_argument("--words", type=int, default=1000)
    return ap


HANDLERS = {
    "lambda-table": cmd_lambda_table,
    "mu-table": cmd_mu_table,
    "gamma": cmd_gamma,
    "verify-hochschild": cmd_verify,
    "verify-appendix": cmd_verify,
    "verify-lr": cmd_verify,
    "verify-semidirect": cmd_verify,
    "pbw": cmd_pbw,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    from .lierinehart import UnknownExample
    from .superpoly import ParityCaseMismatch

    try:
        text, code = HANDLERS[args.command](args)
    except (UsageError, UnknownExample, ParityCaseMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())
