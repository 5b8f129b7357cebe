"""Command-line front end.

Exit codes: 0 success, 2 usage/parse error, 3 validation error,
4 internal invariant violation.  Every error prints exactly one line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import sympy

from .errors import (
    CardinalityError,
    FieldError,
    FieldMismatchError,
    InvariantError,
    ParseError,
    ValidationError,
    ZeroPolynomialError,
)
from .fibre import hws_bound, make_system, point_count, verify_isogeny
from .finite_field import parse_field
from .polynomial import parse_poly
from .records import format_results, ingest_records, verify_paper
from .search import SearchConfig, attach_records, run_search, throughput_probe

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _system(args):
    spec = parse_field(args.field)
    if not args.poly:
        raise UsageError("at least one --poly is required")
    return make_system(spec, [parse_poly(p, spec) for p in args.poly])


def cmd_count(args) -> int:
    rep = point_count(_system(args), with_oracle=not args.no_oracle)
    print(rep.to_json(indent=2))
    return EXIT_OK


def cmd_isogeny(args) -> int:
    chk = verify_isogeny(_system(args))
    out = {
        "genus": chk.genus,
        "product_l_polynomial": chk.product.to_list(),
        "factors": {str(m): L.to_list() for m, L in chk.factors.items()},
        "extensions": [
            {"m": m, "predicted": p, "affine": a, "infinity_defect": d} for m, p, a, d in chk.extension_rows
        ],
        "factor_checks": [{"mask": k, "m": m, "predicted": p, "counted": c} for k, m, p, c in chk.factor_rows],
        "ok": chk.ok,
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK if chk.ok else EXIT_INTERNAL


def cmd_verify_paper(args) -> int:
    results = verify_paper(args.fixtures)
    if args.json:
        print(json.dumps([
            {"row": r.row.label, "status": r.status, "printed": {"A": list(r.row.A), "N": r.row.N, "g": r.row.genus},
             "computed": {"A": list(r.A), "N": r.N, "g": r.genus}}
            for r in results
        ], indent=2))
    else:
        print(format_results(results))
    return EXIT_OK if all(r.status != "FAIL" for r in results) else 1


def _search_config(args) -> SearchConfig:
    base: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except OSError as exc:
            raise ParseError(f"{args.config}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.config}: invalid JSON ({exc.msg})") from exc
    flags = {
        "field": args.field,
        "degrees": args.degrees,
        "strategy": args.strategy,
        "budget": args.budget,
        "seed": args.seed,
        "top": args.top,
        "patience": args.patience,
        "cap": args.cap,
        "batch_size": args.batch_size,
        "workers": args.workers,
    }
    base.update({k: v for k, v in flags.items() if v is not None})
    if args.no_normalize:
        base["normalize"] = False
    if args.all_lc:
        base["monic_only"] = False
    if args.lc_classes:
        base["lc_classes"] = True
    if "field" not in base or "degrees" not in base:
        raise UsageError("search needs --field and --degrees (or a --config providing them)")
    if isinstance(base["degrees"], str):
        try:
            base["degrees"] = [int(t) for t in base["degrees"].split(",")]
        except ValueError as exc:
            raise ParseError(f"bad degree list {base['degrees']!r}") from exc
    return SearchConfig.from_dict(base)


def cmd_search(args) -> int:
    cfg = _search_config(args)
    table = ingest_records(args.records) if args.records else None
    result = run_search(cfg)
    if table is not None:
        attach_records(result.entries, table)
    sys.stdout.write(result.jsonl())
    if args.timing:
        print(json.dumps({"timing": result.timing()}), file=sys.stderr)
    return EXIT_OK


def _cardinality(text: str) -> int:
    """q from a field spec or a bare prime power such as 25."""
    text = text.strip()
    if text.isdigit():
        q = int(text)
        if q >= 2 and len(sympy.factorint(q)) == 1:
            return q
        raise UsageError(f"q = {q} is not a prime power")
    return parse_field(text).q


def cmd_bound(args) -> int:
    if args.genus < 0:
        raise UsageError("genus must be >= 0")
    print(hws_bound(_cardinality(args.q), args.genus))
    return EXIT_OK


def cmd_probe(args) -> int:
    spec = parse_field(args.field)
    degrees = [int(t) for t in args.degrees.split(",")]
    rate = throughput_probe(spec, degrees, args.budget, args.mode)
    print(json.dumps({"field": args.field, "degrees": degrees, "mode": args.mode, "candidates_per_s": rate}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fibrecurves", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    for name, fn, hlp in (("count", cmd_count, "genus and point count of a fibre product"),
                          ("isogeny", cmd_isogeny, "check prod_I L_I against extension counts")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--field", required=True, help="p, p^n or p^n:c0,...,cn")
        p.add_argument("--poly", action="append", default=[], help="ascending coefficients, repeatable")
        if name == "count":
            p.add_argument("--no-oracle", action="store_true", help="skip the affine oracle")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify-paper", help="recompute the bundled example rows")
    p.add_argument("--fixtures", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("search", help="hunt for curves with many points")
    p.add_argument("--config", help="JSON file with SearchConfig fields")
    p.add_argument("--field")
    p.add_argument("--degrees", help="comma-separated, e.g. 4,4")
    p.add_argument("--strategy", choices=["exhaustive", "random", "hill-climb"])
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--top", type=int)
    p.add_argument("--patience", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--no-normalize", action="store_true", help="do not fix f_1's x^(d-1) coefficient")
    p.add_argument("--all-lc", action="store_true", help="allow every nonzero leading coefficient")
    p.add_argument("--lc-classes", action="store_true", help="leading coefficient 1 or one non-square")
    p.add_argument("--records", help="known-bounds CSV (g,q,lower,upper,source)")
    p.add_argument("--timing", action="store_true", help="print wall time and throughput on stderr")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bound", help="Hasse-Weil-Serre upper bound")
    p.add_argument("--q", required=True)
    p.add_argument("--genus", required=True, type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("probe", help="measure candidate throughput")
    p.add_argument("--field", required=True)
    p.add_argument("--degrees", default="4,4")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--mode", choices=["scalar", "batch"], default="scalar")
    p.set_defaults(func=cmd_probe)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ParseError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, CardinalityError, FieldMismatchError, ZeroPolynomialError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
