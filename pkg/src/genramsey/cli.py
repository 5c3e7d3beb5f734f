"""Command-line entry point.

Exit codes: 0 success, 1 bad input, 2 no candidate within the horizon,
3 capacity exceeded, 4 sieve bound too small, 5 self-test failure,
6 internal inconsistency between backends.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .colorings import DEFAULT_SCAN_BOUND, CapacityError
from .indicator import DEFAULT_CAPACITY, InconsistencyError, check_ideal_membership, evaluate, expand_reduced
from .instance import SpecError, load_json, parse_coloring, parse_indicator, parse_instance
from .ramsey_engine import NotHereditaryError, classical_instance, ramsey_number

EXIT_OK, EXIT_SPEC, EXIT_NONE, EXIT_CAPACITY, EXIT_SIEVE, EXIT_SELFTEST, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5, 6
CAPACITY_ENV = "GENRAMSEY_CAPACITY"

PRIME_HORIZONS = {"twin": 10, "ap": 12, "polignac": 6, "greentao": 12, "zhang-scan": 50}


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=_positive, default=1, help="threads for coloring scans")
    common.add_argument("--capacity", type=_positive, default=None,
                        help=f"cap on scanned colorings and reduced-form size (env {CAPACITY_ENV})")
    common.add_argument("--format", choices=("json", "table"), default="json")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--horizon", type=_nonneg, default=None)
    search.add_argument("--figure", metavar="PATH", default=None, help="also render a figure to PATH")

    sieve = argparse.ArgumentParser(add_help=False)
    sieve.add_argument("--sieve-bound", type=_positive, default=None, help="sieve limit (env GENRAMSEY_SIEVE_BOUND)")

    p = argparse.ArgumentParser(prog="genramsey", description="Generalized Ramsey numbers over finite fields.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classical", parents=[common, search], help="R(z_1, ..., z_m) on complete graphs")
    c.add_argument("z", type=_positive, nargs="+")

    g = sub.add_parser("general", parents=[common, search], help="run an instance spec (JSON)")
    g.add_argument("spec")

    ind = sub.add_parser("indicator", help="indicator polynomial operations")
    isub = ind.add_subparsers(dest="action", required=True)
    e = isub.add_parser("eval", parents=[common])
    e.add_argument("spec")
    e.add_argument("--coloring", required=True, help="comma-separated field codes, one per host edge")
    for name in ("expand", "member"):
        x = isub.add_parser(name, parents=[common])
        x.add_argument("spec")

    pr = sub.add_parser("primes", help="prime-pattern encodings")
    psub = pr.add_subparsers(dest="encoding", required=True)
    tw = psub.add_parser("twin", parents=[common, search, sieve])
    tw.add_argument("--m", type=_positive, default=1)
    ap = psub.add_parser("ap", parents=[common, search, sieve])
    ap.add_argument("--t", type=_positive, required=True)
    ap.add_argument("--k", type=_positive, required=True)
    ap.add_argument("--m", type=_positive, default=1)
    po = psub.add_parser("polignac", parents=[common, search, sieve])
    po.add_argument("--t", type=_positive, required=True)
    po.add_argument("--m", type=_positive, default=1)
    po.add_argument("--mode", choices=("short_circuit", "exhaustive", "both"), default="short_circuit")
    gt = psub.add_parser("greentao", parents=[common, search, sieve])
    gt.add_argument("--t", type=_positive, required=True)
    zs = psub.add_parser("zhang-scan", parents=[common, search, sieve])
    zs.add_argument("--m-max", type=_positive, default=10)
    zs.add_argument("--t-max", type=_positive, default=3)

    st = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    st.add_argument("--only", action="append", default=None, help="substring filter on property names")
    return p


def _capacity(args) -> Optional[int]:
    if args.capacity is not None:
        return args.capacity
    env = os.environ.get(CAPACITY_ENV)
    if env:
        try:
            v = int(env)
        except ValueError:
            raise SpecError(CAPACITY_ENV, f"{env!r} is not an integer") from None
        if v < 1:
            raise SpecError(CAPACITY_ENV, "must be positive")
        return v
    return None


def _table(args):
    from .prime_encodings import PrimeTable, SIEVE_ENV

    bound = args.sieve_bound
    if bound is None and os.environ.get(SIEVE_ENV):
        try:
            bound = int(os.environ[SIEVE_ENV])
        except ValueError:
            raise SpecError(SIEVE_ENV, "not an integer") from None
    return PrimeTable(bound)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _report_table(rep: dict) -> str:
    lines = [f"candidate: {rep['candidate_value']}  soundness: {rep['soundness']}  horizon: {rep['horizon']}"]
    lines.append(f"{'index':>5}  {'arrows':<6}  {'how':<8}  witness")
    for i, v, c in zip(rep["indices"], rep["arrows_trace"], rep["computed"]):
        w = rep["witnesses"].get(str(i))
        ws = "" if w is None else ",".join(map(str, w))
        if len(ws) > 60:
            ws = ws[:57] + "..."
        lines.append(f"{i:>5}  {str(v).lower():<6}  {'scanned' if c else 'inferred':<8}  {ws}")
    flags = [k for k, v in rep["classification"].items() if v is True]
    lines.append("classification: " + ", ".join(flags))
    for key in ("t", "k", "m", "realizing_primes", "oracle_candidate", "oracle_agreement", "mode_agreement"):
        if key in rep.get("extras", {}):
            lines.append(f"{key}: {rep['extras'][key]}")
    lines.extend(f"note: {n}" for n in rep["notes"])
    return "\n".join(lines)


def _rows_table(rows, cols) -> str:
    out = ["  ".join(f"{c:>16}" for c in cols)]
    for r in rows:
        out.append("  ".join(f"{str(r.get(c)):>16}" for c in cols))
    return "\n".join(out)


def _emit_report(report, args, out) -> int:
    rep = report.to_json()
    if args.format == "json":
        print(_dump(rep), file=out)
    else:
        print(_report_table(rep), file=out)
    if getattr(args, "figure", None):
        from .plotting import plot_arrows_trace

        plot_arrows_trace(report, args.figure)
    return EXIT_OK if report.candidate_value is not None else EXIT_NONE


def _search_kwargs(args):
    cap = _capacity(args)
    return {"workers": args.workers, "bound": cap or DEFAULT_SCAN_BOUND}


def cmd_classical(args, out) -> int:
    base, sym = classical_instance(args.z)
    horizon = 8 if args.horizon is None else args.horizon
    return _emit_report(ramsey_number(base, sym, horizon, **_search_kwargs(args)), args, out)


def cmd_general(args, out) -> int:
    inst = parse_instance(load_json(args.spec))
    horizon = args.horizon if args.horizon is not None else inst.horizon
    if horizon is None:
        raise SpecError("$.horizon", "no horizon in the spec and none given by --horizon")
    return _emit_report(ramsey_number(inst.base, inst.symbol, horizon, **_search_kwargs(args)), args, out)


def cmd_indicator(args, out) -> int:
    expr = parse_indicator(load_json(args.spec))
    cap = _capacity(args)
    if args.action == "eval":
        v = evaluate(expr, parse_coloring(args.coloring, expr))
        res = {"value": v.code, "coefficients": v.coefficients, "field": expr.field.to_json()}
        text = f"value: {v!r}"
    elif args.action == "expand":
        poly = expand_reduced(expr, cap or DEFAULT_CAPACITY)
        res = {"field": expr.field.to_json(), "variables": expr.host.edge_count, "terms": poly.to_json()}
        text = "\n".join(f"{t['coef']} * x^{t['exps']}" for t in res["terms"]) or "0"
    else:
        m = check_ideal_membership(expr, cap or DEFAULT_CAPACITY, cap or DEFAULT_SCAN_BOUND, workers=args.workers)
        res = m.to_json()
        text = f"member: {str(m.member).lower()}  routes: " + ", ".join(f"{k}={str(v).lower()}" for k, v in m.routes.items())
    print(_dump(res) if args.format == "json" else text, file=out)
    return EXIT_OK


def cmd_primes(args, out) -> int:
    from . import prime_encodings as pe

    table = _table(args)
    horizon = PRIME_HORIZONS[args.encoding] if args.horizon is None else args.horizon
    kw = _search_kwargs(args)
    if args.encoding == "zhang-scan":
        rows = pe.zhang_ramsey_scan(args.m_max, args.t_max, horizon, table)
        res = {"horizon": horizon, "sieve_bound": table.bound, "table": rows}
        if args.format == "json":
            print(_dump(res), file=out)
        else:
            print(_rows_table(rows, ["t", "gap", "found_for_all_m", "oracle_agreement"]), file=out)
        if args.figure:
            from .plotting import plot_prime_scan

            plot_prime_scan(rows, args.figure)
        return EXIT_OK
    if args.encoding == "twin":
        report = pe.twin_prime_ramsey(args.m, horizon, table, kw["workers"])
    elif args.encoding == "ap":
        report = pe.ap_ramsey(args.t, args.k, args.m, horizon, table, kw["workers"])
    elif args.encoding == "greentao":
        report = pe.greentao_ramsey(args.t, horizon, table, kw["workers"])
    else:
        report = pe.polignac_ramsey(args.t, args.m, horizon, args.mode, table, kw["workers"], kw["bound"])
    return _emit_report(report, args, out)


def cmd_selftest(args, out) -> int:
    from .selftest import run

    results = run(only=args.only)
    failed = [r for r in results if not r["passed"]]
    if args.format == "json":
        print(_dump({"passed": not failed, "results": results}), file=out)
    else:
        for r in results:
            line = f"{'PASS' if r['passed'] else 'FAIL'}  {r['property']}"
            if r["reproducer"]:
                line += f"  -- {r['reproducer']}"
            print(line, file=out)
    return EXIT_SELFTEST if failed else EXIT_OK


COMMANDS = {
    "classical": cmd_classical,
    "general": cmd_general,
    "indicator": cmd_indicator,
    "primes": cmd_primes,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except CapacityError as exc:
        print(f"error: capacity exceeded: {exc} (bound {exc.bound}, required {exc.required})", file=sys.stderr)
        return EXIT_CAPACITY
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except NotHereditaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except Exception as exc:
        from .prime_encodings import InsufficientSieveError

        if isinstance(exc, InsufficientSieveError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SIEVE
        if isinstance(exc, ValueError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SPEC
        raise


def main_exit():
    sys.exit(main())
