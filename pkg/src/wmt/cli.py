"""``wmt``: command-line front end.

Exit codes: 0 success, 1 a verification failed (report on stdout),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction
from itertools import product

from . import mellin as mg
from . import oracle
from .errors import (BadEpsilon, EpsilonNotRankOne, EpsilonUnsupported, FactorizationFailed,
                     NotEntire, ParseError, UnsupportedSeries)
from .laurent import RationalFunction, render_rational
from .root_data import build_root_datum, generate_weyl

SUITES = ("factorization", "entirety", "consistency", "gl2", "support", "growth", "truncation")
SEED_ENV = "WMT_SEED"

_RATIONAL = re.compile(r"-?\d+(/\d+)?\Z")


class UsageError(Exception):
    pass


def parse_assignment(text: str, allowed=None) -> dict[str, Fraction]:
    """Parse ``"q=2,y1=1/2"`` into exact rationals.

    Values must be integers or ``p/q``; decimals are rejected.  q must
    exceed 1 and no value may be 0.
    """
    out: dict[str, Fraction] = {}
    pos = 0
    for chunk in text.split(","):
        start = pos
        pos += len(chunk) + 1
        item = chunk.strip()
        if "=" not in item:
            raise ParseError(f"expected name=value, got {item!r}", start)
        name, value = (s.strip() for s in item.split("=", 1))
        vpos = start + chunk.index("=") + 1
        if allowed is not None and name not in allowed:
            raise ParseError(f"unknown generator {name!r}", start)
        if name in out:
            raise ParseError(f"duplicate generator {name!r}", start)
        if not _RATIONAL.match(value):
            raise ParseError(f"{value!r} is not an exact rational (use p/q)", vpos)
        try:
            v = Fraction(value)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {value!r}", vpos) from None
        if v == 0:
            raise ParseError(f"{name} must be nonzero", vpos)
        if name == "q" and v <= 1:
            raise ParseError("q must be > 1", vpos)
        out[name] = v
    return out


def _assign(text, allowed):
    try:
        return parse_assignment(text, allowed)
    except ParseError as exc:
        raise UsageError(f"--assign: {exc}") from None


def _parse_epsilon(text, rank):
    if text is None:
        return (0,) * rank
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--epsilon: expected comma-separated integers, got {text!r}") from None


def _parse_range(text):
    m = re.fullmatch(r"(-?\d+)(?:\.\.(-?\d+))?", text)
    if not m:
        raise UsageError(f"--k: expected a..b, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"--k: empty range {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--series", default="A", help="A, B, C, D or G2 (default A)")
    common.add_argument("--rank", type=int, default=1, help="rank r (default 1)")
    common.add_argument("--epsilon", default=None,
                        help="comma-separated 0/1 flags per simple root (default all 0)")
    common.add_argument("--format", choices=("json", "text"), default="text",
                        help="output format (default text)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for Weyl sums; output does not depend on it")

    p = argparse.ArgumentParser(prog="wmt", description="Exact Whittaker-Mellin computations.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("roots", parents=[common], help="root datum")
    sub.add_parser("weyl", parents=[common], help="Weyl group elements")

    c = sub.add_parser("coeffs", parents=[common], help="lattice coefficients of I(lambda)")
    c.add_argument("--k", default="0..3", help="range a..b for every coordinate (default 0..3)")
    c.add_argument("--assign", default=None, help="evaluate at e.g. q=2,y1=1/2")

    m = sub.add_parser("mellin", parents=[common], help="Mellin symbol I(lambda)")
    m.add_argument("--diagonal", action="store_true", help="specialize lambda_alpha = s")

    sub.add_parser("lfactors", parents=[common], help="L-factors and F_nu")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=None,
                   help=f"seed for randomized suites (default ${SEED_ENV} or 0)")
    v.add_argument("--K", type=int, default=None,
                   help="truncation order (default 40 at rank 1, 25 above)")
    v.add_argument("--k-max", type=int, default=20, help="growth probe range (default 20)")
    v.add_argument("--samples", type=int, default=None,
                   help="random samples for support (200) and truncation (20)")

    e = sub.add_parser("eval", parents=[common], help="evaluate I(lambda) exactly")
    e.add_argument("--assign", required=True, help="e.g. q=2,y1=1/2,x1=1/8")
    e.add_argument("--diagonal", action="store_true", help="evaluate I(s) with a single x")
    return p


def _params(args) -> mg.SpectralParams:
    eps = _parse_epsilon(args.epsilon, args.rank)
    try:
        datum = build_root_datum(args.series, args.rank, eps)
    except UnsupportedSeries as exc:
        raise UsageError(f"--series/--rank: {exc}") from None
    except (BadEpsilon, EpsilonNotRankOne) as exc:
        raise UsageError(f"--epsilon: {exc}") from None
    return mg.SpectralParams(datum)


def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _emit(out, args, obj, text):
    if args.format == "json":
        out.write(json.dumps(obj) + "\n")
    else:
        out.write(text + "\n")


def cmd_roots(args, out):
    p = _params(args)
    d = p.datum
    rows = [(i + 1, list(r.root), list(r.coroot)) for i, r in enumerate(d.positive_roots)]
    text = f"{d.series}{d.rank}  epsilon={list(d.epsilon)}  cartan={[list(r) for r in d.cartan]}\n"
    text += _table(("#", "root", "coroot"), rows)
    _emit(out, args, d.to_dict(), text)
    return 0


def cmd_weyl(args, out):
    p = _params(args)
    w = generate_weyl(p.datum)
    rows = [(i, "".join(f"s{j + 1}" for j in e.word) or "1", e.length, e.sign)
            for i, e in enumerate(w.elements)]
    text = f"order={len(w)}  longest={w.longest}\n" + _table(("#", "word", "length", "sign"), rows)
    _emit(out, args, w.to_dict(), text)
    return 0


def cmd_coeffs(args, out):
    p = _params(args)
    lo, hi = _parse_range(args.k)
    allowed = {"q"} | {f"y{i + 1}" for i in range(p.rank)}
    assign = _assign(args.assign, allowed) if args.assign else None
    sym = mg.mellin_symbolic(p, threads=args.threads)
    K = max(hi, 0) * p.rank
    table = mg.coefficients(sym, K)
    entries, rows = [], []
    for k in product(range(lo, hi + 1), repeat=p.rank):
        c = table[k]
        item = {"k": list(k), "coefficient": c.to_dict()}
        row = [",".join(map(str, k))]
        if p.rank == 1:
            # c_k = W(a(pi^k)) q^k at rank one
            w = c * RationalFunction.monomial(p.gens, (-k[0], 0, 0))
            item["whittaker"] = w.reduce().to_dict()
        if assign:
            full = dict(assign)
            full.update({f"x{i + 1}": 1 for i in range(p.rank)})
            val = c.eval_exact(full)
            item["coefficient_value"] = render_rational(val)
            row.append(render_rational(val))
            if p.rank == 1:
                wv = w.eval_exact(full)
                item["whittaker_value"] = render_rational(wv)
                row.append(render_rational(wv))
        else:
            row.append(c.reduce().to_text())
            if p.rank == 1:
                row.append(w.reduce().to_text())
        entries.append(item)
        rows.append(row)
    headers = ["k", "coefficient"] + (["whittaker"] if p.rank == 1 else [])
    obj = {"series": p.datum.series, "rank": p.rank, "epsilon": list(p.epsilon),
           "assignment": {k: render_rational(v) for k, v in (assign or {}).items()},
           "entries": entries}
    _emit(out, args, obj, _table(headers, rows))
    return 0


def cmd_mellin(args, out):
    p = _params(args)
    sym = mg.mellin_symbolic(p, threads=args.threads)
    if args.diagonal or p.rank <= 2:
        obj = sym.to_dict(diagonal=args.diagonal)
        fn = RationalFunction.from_dict(obj)
        text = fn.to_text()
    else:
        # the combined numerator is very large from rank 3 on; emit C(nu) and the summands
        summands = sym.summands()
        obj = {"c_factor": sym.c.to_dict(), "summands": [s.to_dict() for s in summands],
               "provenance": {"series": p.datum.series, "rank": p.rank,
                              "epsilon": list(p.epsilon), "weyl_terms": len(sym.terms),
                              "diagonal": False}}
        text = f"C = {sym.c.to_text()}\n" + "\n".join(f"  + {s.to_text()}" for s in summands)
    _emit(out, args, obj, f"weyl_terms={len(sym.terms)}\n{text}")
    return 0


def cmd_lfactors(args, out):
    p = _params(args)
    obj = {"series": p.datum.series, "rank": p.rank, "epsilon": list(p.epsilon),
           "l_trivial": mg.l_trivial(p).to_dict()}
    lines = [f"L(triv) = {mg.l_trivial(p).to_text()}"]
    try:
        la, lp = mg.l_adjoint(p), mg.l_pi(p)
        obj["l_adjoint"], obj["l_pi"] = la.to_dict(), lp.to_dict()
        lines += [f"L(Ad)   = {la.to_text()}", f"L_pi    = {lp.to_text()}"]
    except EpsilonUnsupported as exc:
        obj["l_adjoint"] = obj["l_pi"] = None
        lines.append(f"L(Ad)   unavailable: {exc}")
    fn = mg.f_nu(p)
    obj["f_nu"] = fn.to_dict()
    lines.append(f"F_nu    = {fn.to_text()}")
    _emit(out, args, obj, "\n".join(lines))
    return 0


def cmd_eval(args, out):
    p = _params(args)
    if args.diagonal:
        allowed = {"q", "x"} | {f"y{i + 1}" for i in range(p.rank)}
    else:
        allowed = set(p.gens.names)
    assign = _assign(args.assign, allowed)
    missing = sorted((set(p.diagonal_gens.names) if args.diagonal else set(p.gens.names)) - set(assign))
    if missing:
        raise UsageError(f"--assign: missing generators {missing}")
    sym = mg.mellin_symbolic(p, threads=args.threads)
    value = mg.specialize_diagonal(sym).eval_exact(assign) if args.diagonal else sym.eval_exact(assign)
    obj = {"series": p.datum.series, "rank": p.rank, "epsilon": list(p.epsilon),
           "diagonal": args.diagonal,
           "assignment": {k: render_rational(v) for k, v in assign.items()},
           "value": render_rational(value)}
    _emit(out, args, obj, render_rational(value))
    return 0


# verification suites; each returns a dict with at least "suite" and "pass"

def _suite_factorization(p, args):
    try:
        rep = mg.verify_factorization(p, mg.mellin_symbolic(p, threads=args.threads))
    except FactorizationFailed as exc:
        rep = exc.report
    return {"suite": "factorization", "pass": rep["status"] == "pass", **rep}


def _suite_entirety(p, args):
    try:
        fn = mg.f_nu(p)
        return {"suite": "entirety", "pass": True, "x_degree": max(e[1] for e in fn.num.terms)}
    except NotEntire as exc:
        return {"suite": "entirety", "pass": False, "residual": exc.function.to_dict()}


def _suite_consistency(p, args):
    if p.datum.series != "A" or any(p.epsilon) or p.rank > 2:
        return {"suite": "consistency", "pass": True, "skipped": "needs type A, rank <= 2, epsilon = 0"}
    ok = oracle.gln_proposition(p.rank + 1).equals(mg.mellin_symbolic(p).value)
    return {"suite": "consistency", "pass": ok, "n": p.rank + 1}


def _suite_gl2(p, args):
    rep = oracle.gl2_cross_oracle(50)
    return {"suite": "gl2", **rep.to_dict()}


def _suite_support(p, args, rng, table):
    samples = args.samples or 200
    bad = []
    for _ in range(samples):
        while True:
            k = tuple(rng.randint(-5, 10) for _ in range(p.rank))
            if min(k) < 0:
                break
        if not table[k].is_zero():
            bad.append(list(k))
    return {"suite": "support", "pass": not bad, "samples": samples, "failures": bad}


def _suite_growth(p, args, table):
    reps = [oracle.growth_probe(p, d, args.k_max, table) for d in range(p.rank)]
    return {"suite": "growth", "pass": all(r.passed for r in reps),
            "directions": [{"direction": r.direction + 1, "onset": r.onset, "pass": r.passed}
                           for r in reps]}


def _suite_truncation(p, args, rng, table, K):
    samples = args.samples or 20
    reports = [oracle.truncated_mellin_sum(p, oracle.random_assignment(p, rng), K, table)
               for _ in range(samples)]
    return {"suite": "truncation", "pass": all(r.passed for r in reports), "K": K,
            "reports": [r.to_dict() for r in reports]}


def cmd_verify(args, out):
    p = _params(args)
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, "0"))
    rng = random.Random(seed)
    K = args.K if args.K is not None else (40 if p.rank == 1 else 25)
    suites = SUITES if args.suite == "all" else (args.suite,)
    need = K if "truncation" in suites else 0
    need = max(need, args.k_max if {"growth", "support"} & set(suites) else 0)
    table = mg.coefficients(mg.mellin_symbolic(p, threads=args.threads), need) if need else None
    results = []
    for s in suites:
        if s == "factorization":
            results.append(_suite_factorization(p, args))
        elif s == "entirety":
            results.append(_suite_entirety(p, args))
        elif s == "consistency":
            results.append(_suite_consistency(p, args))
        elif s == "gl2":
            results.append(_suite_gl2(p, args))
        elif s == "support":
            results.append(_suite_support(p, args, rng, table))
        elif s == "growth":
            results.append(_suite_growth(p, args, table))
        elif s == "truncation":
            results.append(_suite_truncation(p, args, rng, table, K))
    ok = all(r["pass"] for r in results)
    report = {"status": "pass" if ok else "fail", "series": p.datum.series, "rank": p.rank,
              "epsilon": list(p.epsilon), "seed": seed, "assumption": mg.FNU_ASSUMPTION,
              "suites": results}
    text = _table(("suite", "status"), [(r["suite"], "pass" if r["pass"] else "FAIL")
                                        for r in results])
    # failures always carry the JSON report
    if not ok or args.format == "json":
        out.write(json.dumps(report) + "\n")
    else:
        out.write(text + "\n")
    return 0 if ok else 1


COMMANDS = {"roots": cmd_roots, "weyl": cmd_weyl, "coeffs": cmd_coeffs, "mellin": cmd_mellin,
            "lfactors": cmd_lfactors, "verify": cmd_verify, "eval": cmd_eval}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"wmt {args.command}: error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
