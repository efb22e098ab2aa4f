"""
wzb: reproduce the registry, verify pairs and evaluate integrals and series

Exit status: 0 when everything passed, 1 when something failed or raised,
2 for usage and parse errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .barnes import choose_contour, eval_integral
from .closedform import ZERO
from .config import OUTPUT_FORMATS, Settings
from .dsl import TermFile, parse_file
from .errors import DSLSyntaxError, UnknownId, WZBError
from .exact import as_rational
from .hyperterm import wz_verify
from .paperlib import Report, ex1_dual_pair, lookup, make_report, registry, reproduce_all
from .report_table import ReportTable, compare_reports
from .run_log import get_run_log
from .series import example2_identity, weighted_series_sum, zeilberger_diagonal_check

logger = logging.getLogger("wzbarnes")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, help="decimal digits (default 30, or WZB_DIGITS)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, dest="output_format", help="output format")
    common.add_argument("--log-dir", type=Path, help="append every result to a run log here")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = argparse.ArgumentParser(prog="wzb", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("reproduce", parents=[common], help="run registry items")
    rep.add_argument("--all", action="store_true", help="every item (the default)")
    rep.add_argument("--item", action="append", dest="items", metavar="ID", help="one item; repeatable")
    rep.add_argument("--workers", type=int, help="worker processes")
    rep.add_argument("--save", type=Path, metavar="DIR", help="store the reports in DIR/reports.tsv")
    rep.add_argument("--compare", type=Path, metavar="DIR", help="compare with DIR/reports.tsv")

    sub.add_parser("list", parents=[common], help="list registry items")

    verify = sub.add_parser("verify", parents=[common], help="check the WZ pairs of a term file")
    verify.add_argument("file", type=Path)

    barnes = sub.add_parser("barnes", parents=[common], help="evaluate the integrands of a term file")
    barnes.add_argument("file", type=Path)
    barnes.add_argument("--t", type=_rational, help="value of the parameter t")

    series = sub.add_parser("series", parents=[common], help="sum the series of a term file")
    series.add_argument("file", type=Path)
    series.add_argument("--x", type=_rational, help="value of the parameter x")

    diagonal = sub.add_parser("diagonal", parents=[common], help="diagonal summation of a dual pair")
    diagonal.add_argument("file", type=Path, nargs="?", help="term file with a pair (default: Example 1 dual)")
    diagonal.add_argument("--j", type=int, default=1)

    ex2 = sub.add_parser("example2", parents=[common], help="x-shifted summation formula")
    ex2.add_argument("--x", type=_rational, default=as_rational(1))
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _load(path: Path, x_value=None) -> TermFile:
    try:
        return parse_file(path, x_value)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}")
    except DSLSyntaxError as exc:
        raise UsageError(f"{path}:{exc}")


def _emit(reports: List[Report], settings: Settings, extra: Optional[dict] = None):
    if settings.output_format == "json":
        payload = [r.to_dict() for r in reports]
        print(json.dumps(payload, indent=2))
        return
    for r in reports:
        value = r.computed_re if not r.computed_im or r.computed_im == "0.0" else f"{r.computed_re} + {r.computed_im}*i"
        line = f"{r.id:<24} {r.status:<5} {value}"
        if r.expected:
            line += f"  expected {r.expected}  |diff| {r.abs_diff}"
        if r.message:
            line += f"  ({r.message})"
        print(line)
    for key, value in (extra or {}).items():
        print(f"{key}: {value}")


def _finish(reports: List[Report], settings: Settings, command: str) -> int:
    if settings.log_dir is not None:
        run_log = get_run_log(settings.log_dir)
        for report in reports:
            run_log.record(report, command)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _cmd_reproduce(args, settings: Settings) -> int:
    prec = settings.precision()
    ids = args.items if args.items and not args.all else None
    if ids:
        for item_id in ids:
            lookup(item_id)
    reports = reproduce_all(prec, workers=settings.workers, ids=ids)
    _emit(reports, settings)
    status = _finish(reports, settings, "reproduce")

    if args.save is not None:
        ReportTable(args.save).insert_many(reports)
    if args.compare is not None:
        problems = compare_reports(ReportTable(args.compare).all(), reports)
        for problem in problems:
            print(f"mismatch: {problem}", file=sys.stderr)
        if problems:
            status = EXIT_FAILED
    return status


def _cmd_list(args, settings: Settings) -> int:
    items = registry()
    if settings.output_format == "json":
        print(json.dumps([{"id": i.id, "kind": i.kind, "description": i.description,
                           "expected": i.expected.text()} for i in items], indent=2))
    else:
        for item in items:
            print(f"{item.id:<24} {item.kind:<17} {item.expected.text():<28} {item.description}")
    return EXIT_OK


def _cmd_verify(args, settings: Settings) -> int:
    pairs = _load(args.file).of_kind("pair")
    if not pairs:
        raise UsageError(f"{args.file}: no pair definitions")
    failed = False
    results = []
    for definition in pairs:
        report = wz_verify(definition.value)
        failed = failed or not report.wz_holds
        results.append({"name": definition.name, "wz_holds": report.wz_holds,
                        "certificate_used": report.certificate_used.to_text(),
                        "residual": report.residual.to_text(),
                        "notes": report.notes})
    if settings.output_format == "json":
        print(json.dumps(results, indent=2))
    else:
        for result in results:
            print(f"{result['name']}: wz_holds: {'true' if result['wz_holds'] else 'false'}")
            if result["certificate_used"] != "0":
                print(f"  certificate: {result['certificate_used']}")
            if not result["wz_holds"]:
                print(f"  residual: {result['residual']}")
            if result["notes"]:
                print(f"  note: {result['notes']}")
    return EXIT_FAILED if failed else EXIT_OK


def _cmd_barnes(args, settings: Settings) -> int:
    prec = settings.precision()
    integrands = _load(args.file).of_kind("integrand")
    if not integrands:
        raise UsageError(f"{args.file}: no integrand definitions")
    reports = []
    for definition in integrands:
        spec = definition.value
        if args.t is not None:
            spec = spec.at(args.t)

        def compute(spec=spec):
            return eval_integral(spec, choose_contour(spec, prec), prec, settings.max_levels).value

        reports.append(make_report(definition.name, compute, definition.expected, prec))
    _emit(reports, settings)
    return _finish(reports, settings, "barnes")


def _cmd_series(args, settings: Settings) -> int:
    prec = settings.precision()
    definitions = _load(args.file, args.x).of_kind("series")
    if not definitions:
        raise UsageError(f"{args.file}: no series definitions")
    reports = [make_report(d.name, lambda d=d: weighted_series_sum(d.value, prec).value, d.expected, prec)
               for d in definitions]
    _emit(reports, settings)
    return _finish(reports, settings, "series")


def _cmd_diagonal(args, settings: Settings) -> int:
    prec = settings.precision()
    if args.file is not None:
        pairs = _load(args.file).of_kind("pair")
        if not pairs:
            raise UsageError(f"{args.file}: no pair definitions")
        pair, name = pairs[0].value, pairs[0].name
    else:
        pair, name = ex1_dual_pair(), "sec4.ex1.dual"
    if args.j < 0:
        raise UsageError("--j must be non-negative")
    identity = {}

    def compute():
        identity["report"] = zeilberger_diagonal_check(pair, args.j, prec)
        return identity["report"].difference

    report = make_report(f"{name}.diagonal.j{args.j}", compute, ZERO, prec)
    extra = {}
    if "report" in identity:
        ctx = prec.context()
        extra = {"diagonal": ctx.nstr(identity["report"].lhs, prec.digits),
                 "column": ctx.nstr(identity["report"].rhs, prec.digits)}
    _emit([report], settings, extra)
    return _finish([report], settings, "diagonal")


def _cmd_example2(args, settings: Settings) -> int:
    prec = settings.precision()
    identity = {}

    def compute():
        identity["report"] = example2_identity(args.x, prec)
        return identity["report"].difference

    report = make_report(f"sec4.ex2.x={args.x}", compute, ZERO, prec)
    extra = {}
    if "report" in identity:
        ctx = prec.context()
        extra = {"lhs": ctx.nstr(identity["report"].lhs, prec.digits),
                 "rhs": ctx.nstr(identity["report"].rhs, prec.digits)}
    _emit([report], settings, extra)
    return _finish([report], settings, "example2")


COMMANDS = {
    "reproduce": _cmd_reproduce,
    "list": _cmd_list,
    "verify": _cmd_verify,
    "barnes": _cmd_barnes,
    "series": _cmd_series,
    "diagonal": _cmd_diagonal,
    "example2": _cmd_example2,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        settings = Settings.from_env().with_overrides(
            digits=args.digits,
            output_format=args.output_format,
            workers=getattr(args, "workers", None),
            log_dir=args.log_dir,
        )
        return COMMANDS[args.command](args, settings)
    except (UsageError, UnknownId) as exc:
        print(f"wzb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WZBError as exc:
        # DomainError lands here, not in the ValueError branch
        if args.verbose >= 2:
            logger.exception("%s failed", args.command)
        print(f"wzb: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"wzb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
