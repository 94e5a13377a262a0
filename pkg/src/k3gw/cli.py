"""Command-line interface: exact kernels, invariants, fits, and self-tests.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification
mismatch.  All numeric output is exact; rationals print as num/den.
"""

import argparse
import json
import os
import sys

from .exact import QQ
from . import kernels
from .engine import Engine, EngineError, RankBudgetExceeded
from .dsl import BETA, ParseError, bracket_to_text, parse_bracket, resolve_beta
from . import polyfit
from . import virasoro
from . import selftest

USAGE_ERROR, COMPUTE_ERROR, MISMATCH = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(USAGE_ERROR)


def _engine():
    return Engine(cache_path=os.environ.get("K3GW_CACHE"))


def _emit(args, payload, text):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _qexp_text(exp):
    parts = []
    for n, c in enumerate(exp.coeffs):
        if not c and len(exp.coeffs) > 1:
            continue
        if n == 0:
            parts.append(str(c))
        elif n == 1:
            parts.append("%s*q" % c)
        else:
            parts.append("%s*q^%d" % (c, n))
    return " + ".join(parts) if parts else "0"


def cmd_kernel(args):
    which = args.which
    if which == "C":
        if args.l is None:
            raise SystemExit(_usage("kernel --which C needs --l"))
        form = kernels.C_series(args.k, args.l)
    elif which == "A":
        form = kernels.A_series(args.k)
    else:
        form = kernels.B_series(args.k)
    if args.format == "qexp":
        exp = form.qexpand(args.qprec)
        _emit(
            args,
            {"which": which, "k": args.k, "l": args.l, "coefficients": [str(c) for c in exp.coeffs]},
            _qexp_text(exp),
        )
    else:
        _emit(
            args,
            {"which": which, "k": args.k, "l": args.l, "qmod": form.serialize()},
            str(form),
        )
    return 0


def _usage(msg):
    sys.stderr.write("error: %s\n" % msg)
    return USAGE_ERROR


def cmd_invariant(args):
    try:
        raw = parse_bracket(args.bracket)
    except ParseError as exc:
        raise SystemExit(_usage("bracket: %s" % exc))
    m = args.beta_sq_half
    ins = resolve_beta(raw, m)
    engine = _engine()
    try:
        value = engine.evaluate(ins)
    except RankBudgetExceeded as exc:
        sys.stderr.write(
            "error: %s\n(the invariant is only determined by this recursion when "
            "enough pairwise-orthogonal hyperbolic pairs remain)\n" % exc
        )
        raise SystemExit(COMPUTE_ERROR)
    except EngineError as exc:
        sys.stderr.write("error: %s\n" % exc)
        raise SystemExit(COMPUTE_ERROR)
    engine.save_cache()
    if args.series:
        payload = {
            "bracket": bracket_to_text(raw),
            "numerator": value.num.serialize(),
            "weight": value.weight(),
            "denominator": "Delta",
        }
        _emit(args, payload, "(%s) / Delta" % value.num)
    else:
        coeff = value.coefficient(m)
        payload = {
            "bracket": bracket_to_text(raw),
            "beta_sq_half": m,
            "invariant": str(coeff),
            "rank_used": engine.rank_used(),
        }
        _emit(args, payload, str(coeff))
    return 0


_KIND_BY_CLASS = {"one": polyfit.KIND_ONE, "pt": polyfit.KIND_PT, "F": polyfit.KIND_F}


def _family_from_text(text, m):
    from .dsl import _CLASS_NAMES

    raw = parse_bracket(text, symbolic_indices=True)
    ins = []
    for k, cls in raw:
        if cls == BETA:
            ins.append(polyfit.Ins(polyfit.KIND_BETA, k))
        elif cls == _CLASS_NAMES["one"]:
            ins.append(polyfit.Ins(polyfit.KIND_ONE, k))
        elif cls == _CLASS_NAMES["pt"]:
            ins.append(polyfit.Ins(polyfit.KIND_PT, k))
        elif cls == _CLASS_NAMES["F"]:
            ins.append(polyfit.Ins(polyfit.KIND_F, k))
        elif isinstance(cls, int) and cls >= 4:
            ins.append(polyfit.Ins(polyfit.KIND_DELTA, k, cls))
        else:
            raise SystemExit(_usage("class %r fits no normalization kind" % (cls,)))
    return polyfit.FamilySpec(text, ins, m)


def cmd_fit(args):
    engine = _engine()
    if args.table or args.all_tables:
        ids = sorted(polyfit.TABLES) if args.all_tables else [args.table]
        reports = []
        ok = True
        for tid in ids:
            if tid not in polyfit.TABLES:
                raise SystemExit(_usage("unknown table %r" % tid))
            rep = polyfit.verify_table(engine, tid)
            reports.append(rep)
            ok = ok and rep["match"]
            if not args.json:
                print("%-12s %s" % (tid, "MATCH" if rep["match"] else "MISMATCH"))
        if args.json:
            print(json.dumps({"reports": reports, "match": ok}, sort_keys=True))
        engine.save_cache()
        return 0 if ok else MISMATCH
    if not args.family:
        raise SystemExit(_usage("need --family or --table/--all-tables"))
    spec = _family_from_text(args.family, args.beta_sq_half)
    try:
        poly = polyfit.fit_polynomial(engine, spec, args.degree)
    except polyfit.NotPolynomial as exc:
        sys.stderr.write("error: %s\n" % exc)
        raise SystemExit(MISMATCH)
    except (polyfit.SingularSystem, polyfit.KindClassificationFailed, EngineError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        raise SystemExit(COMPUTE_ERROR)
    engine.save_cache()
    payload = {
        "family": spec.name,
        "beta_sq_half": spec.m,
        "variables": list(spec.variables),
        "degree_bound": args.degree if args.degree is not None else spec.degree_bound(),
        "polynomial": str(poly),
        "terms": poly.serialize(),
    }
    _emit(args, payload, str(poly))
    return 0


def cmd_virasoro(args):
    engine = _engine()
    try:
        got = virasoro.solve_w(engine, args.k)
    except (virasoro.UnderdeterminedSystem, EngineError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        raise SystemExit(COMPUTE_ERROR)
    engine.save_cache()
    payload = {"w": {str(m): str(v) for m, v in sorted(got.items())}}
    if args.k in virasoro.W_TABLE:
        match = got == virasoro.W_TABLE[args.k]
        payload["reference_match"] = match
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    if args.verify and not payload.get("reference_match", True):
        return MISMATCH
    return 0


def cmd_selftest(args):
    engine = _engine()
    results = selftest.run(args.level, engine)
    ok = True
    for res in results:
        print(res.line())
        ok = ok and res.ok
    if args.json:
        print(json.dumps({"results": [r.as_dict() for r in results], "ok": ok}, sort_keys=True))
    engine.save_cache()
    return 0 if ok else MISMATCH


def build_parser():
    p = _Parser(prog="k3gw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="print a closed-form series A_k, B_k or C_kl")
    k.add_argument("--which", choices=("A", "B", "C"), required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--l", type=int, default=None)
    k.add_argument("--format", choices=("qmod", "qexp"), default="qmod")
    k.add_argument("--qprec", type=int, default=6)
    k.add_argument("--json", action="store_true")
    k.set_defaults(fn=cmd_kernel)

    i = sub.add_parser("invariant", help="evaluate a descendent bracket")
    i.add_argument("--bracket", required=True)
    i.add_argument("--beta-sq-half", type=int, required=True, dest="beta_sq_half")
    i.add_argument("--series", action="store_true", help="print the full series")
    i.add_argument("--json", action="store_true")
    i.set_defaults(fn=cmd_invariant)

    f = sub.add_parser("fit", help="fit or verify a normalized polynomial family")
    f.add_argument("--family", default=None)
    f.add_argument("--beta-sq-half", type=int, default=0, dest="beta_sq_half")
    f.add_argument("--degree", type=int, default=None)
    f.add_argument("--table", default=None)
    f.add_argument("--all-tables", action="store_true", dest="all_tables")
    f.add_argument("--json", action="store_true")
    f.set_defaults(fn=cmd_fit)

    v = sub.add_parser("virasoro", help="solve the constraint coefficients w_{k,m}")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--verify", action="store_true", help="exit 3 unless the reference table matches")
    v.add_argument("--json", action="store_true")
    v.set_defaults(fn=cmd_virasoro)

    s = sub.add_parser("selftest", help="run the identity/acceptance suites")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except EngineError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return COMPUTE_ERROR


if __name__ == "__main__":
    sys.exit(main())
