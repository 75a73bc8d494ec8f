"""ctxprof command line: analyze systems, reproduce the published grids.

Exit codes: 0 success / verification pass; 1 verification mismatch;
2 usage or input errors; 3 solver resource limits.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, catalog
from .levels import level_representation, max_level
from .lp import DEFAULT_COLUMN_CAP, ColumnCapExceeded, RowSchema
from .measures import MEASURES, Options, canonical_measure, degree, is_noncontextual
from .model import format_fraction, validate_system
from .profiles import concat_analysis, concatenate, profile
from .serialize import load_system, system_to_dict, system_to_json
from .simplex import SolveOptions
from .tables import reproduce_table

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _fmt_value(v, decimal: int | None):
    if isinstance(v, float):
        return f"{v:.6f}"
    if decimal is not None:
        return f"{float(v):.{decimal}f}"
    return format_fraction(v)


def _options(args) -> Options:
    schema = RowSchema(args.schema, args.connection_values)
    solver = SolveOptions(tolerance=args.lp_tolerance, pricing=args.lp_pricing, log=args.lp_log)
    return Options(
        mode=args.lp_mode,
        schema=schema,
        cnt2_objective=args.cnt2_objective,
        decompose=args.decompose,
        max_columns=args.lp_max_columns,
        solver=solver,
    )


def _bundle(args, results, t0) -> dict:
    return {
        "command": " ".join(args._argv),
        "version": __version__,
        "config": {
            "lp_mode": args.lp_mode,
            "schema": {"context_basis": args.schema, "connection_values": args.connection_values},
            "cnt2_objective": args.cnt2_objective,
            "max_columns": args.lp_max_columns,
            "pricing": args.lp_pricing,
        },
        "results": results,
        "timing_s": round(time.perf_counter() - t0, 6),
    }


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load(path):
    try:
        system = load_system(path)
    except FileNotFoundError:
        raise SystemExit2(f"no such file: {path}")
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise SystemExit2(f"cannot parse {path}: {exc}")
    report = validate_system(system)
    if not report.ok:
        raise SystemExit2(f"invalid system {path}: " + "; ".join(report.violations))
    return system


class SystemExit2(Exception):
    """Usage/input error carrying exit code 2."""


def _measures_arg(value: str) -> list[str]:
    if value == "all":
        return list(MEASURES)
    return [canonical_measure(m) for m in value.split(",")]


# -- subcommands -------------------------------------------------------------


def cmd_degree(args) -> int:
    t0 = time.perf_counter()
    system = _load(args.system)
    if args.level is not None:
        system = level_representation(system, args.level).system
    options = _options(args)
    results = {}
    for m in _measures_arg(args.measure):
        r = degree(system, m, options)
        results[m] = {
            "value": _fmt_value(r.value, args.decimal),
            "mode": r.mode,
            "stats": {k: v for k, v in r.stats.items() if k != "pivots"} if args.lp_log else {},
        }
    _emit(args, json.dumps(_bundle(args, results, t0), indent=2))
    return EXIT_OK


def cmd_profile(args) -> int:
    t0 = time.perf_counter()
    system = _load(args.system)
    options = _options(args)
    measures = _measures_arg(args.measure)
    profiles = {m: profile(system, m, options) for m in measures}
    if args.format == "csv":
        lines = ["level," + ",".join(measures)]
        for i, (level, _) in enumerate(profiles[measures[0]].entries):
            row = [str(level)]
            for m in measures:
                row.append(_fmt_value(profiles[m].entries[i][1], args.decimal))
            lines.append(",".join(row))
        _emit(args, "\n".join(lines))
    else:
        results = {
            m: [
                {"level": n, "degree": _fmt_value(v, args.decimal)}
                for n, v in profiles[m].entries
            ]
            for m in measures
        }
        _emit(args, json.dumps(_bundle(args, results, t0), indent=2))
    return EXIT_OK


def cmd_levels(args) -> int:
    system = _load(args.system)
    rep = level_representation(system, args.level)
    _emit(args, system_to_json(rep.system, rep.provenance))
    return EXIT_OK


def cmd_concat(args) -> int:
    t0 = time.perf_counter()
    a = _load(args.system_a)
    b = _load(args.system_b)
    options = _options(args)
    if not args.report:
        _emit(args, system_to_json(concatenate(a, b)))
        return EXIT_OK
    results = {}
    for m in _measures_arg(args.measure):
        rep = concat_analysis(a, b, m, options)
        results[m] = {
            "n": rep.n,
            "d_n": _fmt_value(rep.d_n, args.decimal),
            "delta_next": _fmt_value(rep.delta_next, args.decimal),
            "d_next": _fmt_value(rep.d_next, args.decimal),
            "classification": rep.classification.kind,
            "plateau": rep.classification.plateau,
        }
    _emit(args, json.dumps(_bundle(args, results, t0), indent=2))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        _emit(args, "\n".join(catalog.all_ids()))
        return EXIT_OK
    try:
        system = catalog.named(args.id)
    except KeyError as exc:
        raise SystemExit2(str(exc))
    _emit(args, system_to_json(system))
    return EXIT_OK


def cmd_reproduce_tables(args) -> int:
    options = _options(args)
    which = ["table1", "table2"] if args.which == "both" else [args.which]
    ok = True
    for table in which:
        report = reproduce_table(table, options, jobs=args.jobs)
        if args.csv:
            path = args.csv if len(which) == 1 else args.csv.replace(".csv", f"-{table}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(report.csv_lines()) + "\n")
        else:
            sys.stdout.write("\n".join(report.csv_lines()) + "\n")
        sys.stdout.write("\n".join(report.summary_lines()) + "\n")
        ok = ok and report.ok
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_compare_measures(args) -> int:
    options = _options(args)
    ids = args.systems.split(",") if args.systems else catalog.hypercyclic_ids()
    lines = ["system,level,cnt2,cnt3,cntf"]
    for sid in ids:
        try:
            system = catalog.named(sid)
        except KeyError as exc:
            raise SystemExit2(str(exc))
        if args.segments:
            profs = {m: profile(system, m, options) for m in MEASURES}
            for i, (level, _) in enumerate(profs["cnt2"].entries):
                vals = [_fmt_value(profs[m].entries[i][1], args.decimal) for m in MEASURES]
                lines.append(f"{sid},{level}," + ",".join(vals))
        else:
            vals = [_fmt_value(degree(system, m, options).value, args.decimal) for m in MEASURES]
            lines.append(f"{sid},{max_level(system)}," + ",".join(vals))
    _emit(args, "\n".join(lines))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxprof",
        description="Degrees, levels, and profiles of contextuality "
        "(exact rational linear programming).",
    )
    parser.add_argument("--version", action="version", version=f"ctxprof {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lp-mode", choices=("exact", "float"), default="exact")
    common.add_argument("--lp-tolerance", type=float, default=1e-9)
    common.add_argument("--lp-max-columns", type=int, default=DEFAULT_COLUMN_CAP)
    common.add_argument(
        "--lp-pricing", choices=("bland", "dantzig"), default="dantzig",
        help="entering rule of the float discovery layer; the exact layer always uses Bland",
    )
    common.add_argument("--lp-log", action="store_true", help="include solver statistics")
    common.add_argument("--schema", choices=("atoms", "moments"), default="atoms",
                        help="context row basis for feasibility/cnt3/cntf programs")
    common.add_argument("--connection-values", choices=("all", "first"), default="all")
    common.add_argument("--cnt2-objective", choices=("free-moments", "hard-atoms"),
                        default="free-moments")
    common.add_argument("--decompose", action="store_true",
                        help="combine degrees over disjoint components")
    common.add_argument("--decimal", type=int, default=None,
                        help="render values with this many decimal digits instead of p/q")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="write output to this file")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degree", parents=[common], help="degree of one system")
    p.add_argument("system")
    p.add_argument("--measure", default="all", help="cnt2|cnt3|cntf|all or a comma list")
    p.add_argument("--level", type=int, default=None,
                   help="evaluate the level-n representation instead of the system")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("profile", parents=[common], help="level-by-level degrees")
    p.add_argument("system")
    p.add_argument("--measure", default="all")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("levels", parents=[common], help="emit a level-n representation")
    p.add_argument("system")
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("concat", parents=[common], help="concatenate two systems")
    p.add_argument("system_a")
    p.add_argument("system_b")
    p.add_argument("--measure", default="all")
    p.add_argument("--report", action="store_true",
                   help="emit the increment analysis instead of the joined system")
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("catalog", parents=[common], help="named benchmark systems")
    p.add_argument("action", choices=("list", "get"))
    p.add_argument("id", nargs="?", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("reproduce-tables", parents=[common],
                       help="recompute the published concatenation grids")
    p.add_argument("--which", choices=("table1", "table2", "both"), default="both")
    p.add_argument("--csv", default=None, help="write the cell diff to this CSV file")
    p.set_defaults(func=cmd_reproduce_tables)

    p = sub.add_parser("compare-measures", parents=[common],
                       help="measure comparison data over the hypercyclic catalog")
    p.add_argument("--systems", default=None, help="comma list of catalog ids")
    p.add_argument("--segments", action="store_true",
                   help="emit every profile level, not just the final degrees")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_compare_measures)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = ["ctxprof"] + argv
    if args.command == "catalog" and args.action == "get" and not args.id:
        parser.error("catalog get needs a system id")
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ColumnCapExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
