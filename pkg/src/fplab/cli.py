"""Command-line front end.

Exit codes: 0 success, 1 property violation under ``sweep --check``,
2 malformed input (argument, polynomial or sweep-spec parse errors),
3 arithmetic precondition failure (composite modulus, non-divisor order, ...).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import bound_report
from .charsum import SparsePoly, eval_sparse_sum, eval_sum_subgroup_decomposed
from .energy import d_times, dx_vs_t_check, energy_deviation_report
from .errors import FieldError, InvalidPolynomial
from .field import make_field, subgroup
from .incidence import triple_deviation_report
from .sumsets import ratio_shift_set, romanoff_coverage, three_fold_sumset
from .sweep import SpecError, SweepSpec, format_value, run_sweep, sample_lambdas

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_ARITH = 0, 1, 2, 3

TRIPLE_COLUMNS = ("p", "d", "lambda", "T", "main_term", "deviation", "regime", "bound", "ratio")
ENERGY_COLUMNS = ("p", "d", "lambda", "energy", "main_term", "deviation", "regime", "bound", "ratio")


class _ParseFailure(Exception):
    pass


def _emit_json(doc: dict, out) -> None:
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    out.write(json.dumps(doc, indent=2) + "\n")


def _emit_table(pairs: list[tuple[str, object]], out) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        out.write(f"{key:<{width}}  {format_value(value)}\n")


def _emit_csv(header, rows, out) -> None:
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def _lambdas(args, p: int, d: int) -> list[int]:
    if args.lambda_random is not None:
        return sample_lambdas(p, d, args.lambda_random, args.seed)
    return args.lam or [1]


def cmd_expsum(args, out) -> int:
    try:
        poly = SparsePoly.parse(args.poly)
    except InvalidPolynomial as exc:
        raise _ParseFailure(str(exc)) from exc
    ctx = make_field(args.p)
    value = eval_sparse_sum(ctx, poly, args.char)
    doc: dict = {
        "command": "expsum",
        "p": ctx.p,
        "poly": [[a, k] for a, k in poly.terms],
        "char": args.char,
        "S": {"re": value.real, "im": value.imag},
        "abs": abs(value),
    }
    if args.decomposed:
        dec = eval_sum_subgroup_decomposed(ctx, poly, args.char)
        doc["S_decomposed"] = {"re": dec.real, "im": dec.imag}
    if len(poly) == 3:
        doc.update(bound_report(ctx, poly, args.char, value=value).as_dict())
    if args.format == "json":
        _emit_json(doc, out)
    else:
        pairs = [("p", ctx.p), ("char", args.char), ("S.re", value.real),
                 ("S.im", value.imag), ("|S|", abs(value))]
        if "S_decomposed" in doc:
            pairs += [("S_decomposed.re", doc["S_decomposed"]["re"]),
                      ("S_decomposed.im", doc["S_decomposed"]["im"])]
        if "bounds" in doc:
            pairs += [(f"bound.{k}", v) for k, v in doc["bounds"].items()]
            pairs += [("thm16_regime", doc["thm16_regime"]), ("best", doc["best"])]
        _emit_table(pairs, out)
    return EXIT_OK


def cmd_triples(args, out) -> int:
    ctx = make_field(args.p)
    G = subgroup(ctx, args.order)
    rows = []
    for lam in _lambdas(args, ctx.p, args.order):
        r = triple_deviation_report(ctx, G, lam)
        rows.append((r.p, r.order, r.lam, r.T, r.main_term, r.deviation, r.regime, r.regime_bound, r.ratio))
    _emit_csv(TRIPLE_COLUMNS, rows, out)
    return EXIT_OK


def cmd_energy(args, out) -> int:
    ctx = make_field(args.p)
    G = subgroup(ctx, args.order)
    rows = []
    for lam in _lambdas(args, ctx.p, args.order):
        r = energy_deviation_report(ctx, G, lam)
        rows.append((r.p, r.order, r.lam, r.energy, r.main_term, r.deviation, r.regime, r.regime_bound, r.ratio))
    _emit_csv(ENERGY_COLUMNS, rows, out)
    return EXIT_OK


def cmd_dtimes(args, out) -> int:
    ctx = make_field(args.p)
    if args.order is not None:
        U = subgroup(ctx, args.order).elements.tolist()
    else:
        try:
            U = [int(x) for x in args.set.split(",") if x.strip()]
        except ValueError as exc:
            raise _ParseFailure(f"bad --set {args.set!r}") from exc
    doc = {"command": "dtimes", "p": ctx.p, "size": len(set(x % ctx.p for x in U)), "d_times": d_times(ctx, U)}
    if args.check_t:
        check = dx_vs_t_check(ctx, U)
        doc.update(lhs=check.lhs, rhs=check.rhs, ratio=float(check.ratio))
    if args.format == "json":
        _emit_json(doc, out)
    else:
        _emit_table([(k, v) for k, v in doc.items() if k != "command"], out)
    return EXIT_OK


def cmd_sumset(args, out) -> int:
    ctx = make_field(args.p)
    G = subgroup(ctx, args.order)
    if args.kind == "S1":
        r = three_fold_sumset(ctx, G, args.lam, args.mu)
    else:
        r = ratio_shift_set(ctx, G, args.lam, args.mu)
    doc = {
        "command": "sumset", "kind": r.kind, "p": r.p, "order": r.order,
        "lambda": args.lam, "mu": args.mu, "size": r.size,
        "missing_nonzero": r.missing_nonzero, "regime": r.regime,
        "deficiency_bound": r.deficiency_bound, "floor_bound": r.floor_bound,
        "covered": r.covered,
    }
    if r.kind == "S2":
        doc.update(q_size=r.q_size, zero_in_q=r.zero_in_q)
    if args.format == "json":
        _emit_json(doc, out)
    else:
        _emit_table([(k, v) for k, v in doc.items() if k != "command" and v is not None], out)
    return EXIT_OK


def cmd_romanoff(args, out) -> int:
    ctx = make_field(args.p)
    r = romanoff_coverage(ctx, args.base)
    doc = {"command": "romanoff", "p": ctx.p, "base": args.base,
           "missing": r.missing, "order": r.order, "regime": r.regime}
    if args.format == "json":
        _emit_json(doc, out)
    else:
        _emit_table([(k, v) for k, v in doc.items() if k != "command"], out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    try:
        spec = SweepSpec.load(args.spec)
    except SpecError as exc:
        raise _ParseFailure(str(exc)) from exc
    result = run_sweep(spec, jobs=args.jobs, check=args.check)
    text = result.to_csv()
    if args.out:
        Path(args.out).write_text(text, newline="")
    else:
        out.write(text)
    if result.violations:
        for msg in result.violations:
            print(f"violation: {msg}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_calibrate(args, out) -> int:
    from .calibration import write_fixture

    data = write_fixture(args.out, seed=args.seed)
    out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_lambda_options(p):
        grp = p.add_mutually_exclusive_group()
        grp.add_argument("--lambda", dest="lam", type=int, action="append",
                         help="shift (repeatable); default 1")
        grp.add_argument("--lambda-random", type=int, metavar="N",
                         help="sample N distinct nonzero shifts")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("expsum", help="evaluate S_chi(Psi) and compare with known bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--poly", required=True, help='terms "a,k;b,l;c,m"')
    p.add_argument("--char", type=int, default=0, help="character index j in [0, p-2]")
    p.add_argument("--decomposed", action="store_true", help="also evaluate via subgroup averaging")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("triples", help="collinear triples in a subgroup, as CSV")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    add_lambda_options(p)
    p.set_defaults(func=cmd_triples)

    p = sub.add_parser("energy", help="multiplicative energy of shifted subgroups, as CSV")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    add_lambda_options(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("dtimes", help="difference-product count of a set or subgroup")
    p.add_argument("--p", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", help="comma-separated residues")
    src.add_argument("--order", type=int, help="use the subgroup of this order")
    p.add_argument("--check-t", action="store_true", help="also report D / (|U|^2 T + |U|^6)")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_dtimes)

    p = sub.add_parser("sumset", help="three-fold sumset S1 or shifted ratio set S2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--kind", choices=("S1", "S2"), default="S1")
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_sumset)

    p = sub.add_parser("romanoff", help="residues not of the form prime + three powers")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_romanoff)

    p = sub.add_parser("sweep", help="run a JSON-specified parameter sweep")
    p.add_argument("--spec", required=True)
    p.add_argument("--jobs", type=int, default=None, help="override the spec's worker count")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--check", action="store_true", help="run the property suite on every cell")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="regenerate the calibration fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=20240611)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, out)
    except _ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FieldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ARITH


if __name__ == "__main__":
    sys.exit(main())
