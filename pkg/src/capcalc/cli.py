"""Command-line front end.

Exit codes: 0 on success, 1 on bad input, 2 when a certificate is violated
(the search finds an obstructive class, or a volume-filling check fails).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classes import ClassSxS, diophantine_check, is_exceptional, parse_tail, to_p2
from .exactnum import as_fraction, format_rational, parse_rational, to_decimal
from .obstruction import (
    ExcludedPoint,
    UnknownRFValue,
    determining_class,
    interval_index,
    is_obstructive_at,
    mu,
    rf,
    cb8,
    volume_bound,
)
from .reduction import Outcome, reduce_at_point, verify_volume_fills
from .search import SearchConfig, certify_no_obstruction
from .weights import weight_expansion

log = logging.getLogger("capcalc")

RF_CURVE_SCHEMA = "capcalc.rf-curve/1"
RF_CURVE_FIELDS = ("b", "n", "class", "rf_exact", "rf_decimal")
DECIMAL_DIGITS = 15

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


# -- figure data ----------------------------------------------------------------


@dataclass(frozen=True)
class CurveRow:
    b: Fraction
    n: int | None
    cls: str
    rf: Fraction | None

    def as_strings(self) -> dict[str, str]:
        return {
            "b": format_rational(self.b),
            "n": "" if self.n is None else str(self.n),
            "class": self.cls,
            "rf_exact": "unknown" if self.rf is None else format_rational(self.rf),
            "rf_decimal": "unknown" if self.rf is None else str(to_decimal(self.rf, DECIMAL_DIGITS)),
        }


def _rf_row(b: Fraction) -> CurveRow:
    if b == 2:
        # Right end of I_2: the T_1 formula extends continuously to b = 2.
        name, cls = determining_class(2)
        return CurveRow(b, 2, name, 2 * b * mu(cls, 8, b) ** 2)
    idx = interval_index(b)
    if isinstance(idx, ExcludedPoint):
        return CurveRow(b, None, "unknown", None)
    name, _ = determining_class(idx.n)
    return CurveRow(b, idx.n, name, rf(b))


def emit_rf_curve(b_from, b_to, steps: int) -> list[CurveRow]:
    """RF(b) on ``steps + 1`` equally spaced b in ``[b_from, b_to]``; excluded
    points give rows with ``rf = None``.
    """
    lo = parse_rational(b_from) if isinstance(b_from, str) else as_fraction(b_from)
    hi = parse_rational(b_to) if isinstance(b_to, str) else as_fraction(b_to)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not (1 < lo < hi <= 2):
        raise ValueError("need 1 < from < to <= 2")
    width = hi - lo
    return [_rf_row(lo + width * i / steps) for i in range(steps + 1)]


def write_rf_curve(rows: Sequence[CurveRow], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            {"schema_version": RF_CURVE_SCHEMA, "rows": [r.as_strings() for r in rows]}, indent=1
        )
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={RF_CURVE_SCHEMA}\n")
        writer = csv.DictWriter(buf, fieldnames=RF_CURVE_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r.as_strings())
        return buf.getvalue()
    lines = [f"{'b':>14}  {'n':>4}  {'class':>7}  {'RF(b)':>18}  exact"]
    for r in rows:
        s = r.as_strings()
        lines.append(f"{s['b']:>14}  {s['n']:>4}  {s['class']:>7}  {s['rf_decimal']:>18}  {s['rf_exact']}")
    return "\n".join(lines)


def read_rf_curve(text: str) -> list[CurveRow]:
    """Parse CSV or JSON written by :func:`write_rf_curve`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        raw = data["rows"]
    else:
        lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
        raw = list(csv.DictReader(lines))
    rows = []
    for r in raw:
        rows.append(
            CurveRow(
                parse_rational(r["b"]),
                int(r["n"]) if r["n"] else None,
                r["class"],
                None if r["rf_exact"] == "unknown" else parse_rational(r["rf_exact"]),
            )
        )
    return rows


# -- argument handling ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_class(text: str) -> ClassSxS:
    """``"d,e;m1,m2,..."`` with run syntax ``4^x7`` allowed in the tail."""
    try:
        head, tail = text.split(";", 1)
        d, e = (int(x) for x in head.split(","))
        return ClassSxS(d, e, parse_tail(tail))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad class {text!r}; expected 'd,e;m1,m2,...'") from None


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("CAPCALC_JOBS", "1")))
    except ValueError:
        return 1


def _dec(x) -> str:
    return str(to_decimal(x, DECIMAL_DIGITS))


def _write_out(path: str | None, text: str):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_weights(args) -> int:
    w = weight_expansion(args.a)
    print(str(w))
    print(f"length {w.length}, last denominator {w.last_denominator}")
    return EXIT_OK


def cmd_class(args) -> int:
    c = ClassSxS(args.d, args.e, parse_tail(args.m))
    s1, s2 = sum(c.tail), sum(m * m for m in c.tail)
    print(f"class {c}")
    print(f"sum m   = {s1}, 2(d+e)-1 = {2 * (c.d + c.e) - 1}")
    print(f"sum m^2 = {s2}, 2de+1    = {2 * c.d * c.e + 1}")
    print(f"diophantine: {diophantine_check(c)}")
    res = is_exceptional(c, args.max_moves)
    print(f"exceptional: {res.verdict.value} ({res.reason})")
    if res.trace:
        print(f"plane basis: {to_p2(c)}")
        for i, v in enumerate(res.trace):
            print(f"  {i:3d}  {v}")
    return EXIT_OK


def cmd_mu(args) -> int:
    rep = is_obstructive_at(args.cls.ordered(), args.a, args.b)
    vol = volume_bound(args.a, args.b)
    print(f"mu = {format_rational(rep.mu)} ~ {_dec(rep.mu)}")
    print(f"volume = {vol} ~ {float(vol):.15g}")
    print(f"obstructive: {rep.obstructive} (margin {format_rational(rep.margin_sq)})")
    return EXIT_OK


def cmd_rf(args) -> int:
    value = rf(args.b)
    name, _ = determining_class(interval_index(args.b).n)
    print(f"RF({format_rational(args.b)}) = {format_rational(value)} ~ {_dec(value)}  [{name}]")
    return EXIT_OK


def cmd_cb8(args) -> int:
    value = cb8(args.b)
    name, _ = determining_class(interval_index(args.b).n)
    print(f"c_b(8) at b={format_rational(args.b)}: {format_rational(value)} ~ {_dec(value)}  [{name}]")
    return EXIT_OK


def cmd_rf_curve(args) -> int:
    rows = emit_rf_curve(args.b_from, args.b_to, args.steps)
    _write_out(args.out, write_rf_curve(rows, args.format))
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = SearchConfig(q_max=args.qmax, e_max=args.emax, method=args.method)

    def progress(done, total, a):
        log.info("center %s done (%d/%d)", format_rational(a), done, total)

    report = certify_no_obstruction(cfg, progress, jobs=args.jobs, checkpoint=args.checkpoint)
    _write_out(args.out, json.dumps(report.to_dict(), indent=1))
    if args.out:
        print(
            f"{len(report.centers_checked)} centers, {report.pairs_checked} (d,e) pairs, "
            f"{report.classes_generated} candidate classes, "
            f"{len(report.obstructive_found)} obstructive"
        )
    return EXIT_OK if report.certified else EXIT_VIOLATION


def cmd_reduce(args) -> int:
    t = reduce_at_point(args.a, args.b, args.max_moves)
    print(f"{t.outcome.value} ({t.moves} moves)")
    if args.trace:
        for i, (v, d) in enumerate(t.steps):
            print(f"  {i:3d}  {v}   defect {d}")
    return EXIT_OK


def _arange(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise UsageError("--a-step must be positive")
    out, x = [], lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def cmd_verify(args) -> int:
    a_samples = _arange(args.a_from, args.a_to, args.a_step)
    b_samples = [parse_rational(x) for x in args.b_list.split(",") if x.strip()]
    if any(not 1 <= b <= 2 for b in b_samples):
        raise UsageError("--b-list values must lie in [1, 2]")
    report = verify_volume_fills(a_samples, b_samples, args.max_moves, jobs=args.jobs)
    text = json.dumps(report.to_dict(), indent=1)
    if args.out:
        _write_out(args.out, text)
    print(
        f"{len(report.points)} points, {len(report.failures)} failures, "
        f"max moves {report.max_moves}"
    )
    return EXIT_OK if report.all_success else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="capcalc", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("weights", help="weight expansion of a")
    s.add_argument("a", type=_rational)
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("class", help="Diophantine and exceptionality check")
    cs = s.add_subparsers(dest="class_command", required=True, parser_class=_Parser)
    c = cs.add_parser("check")
    c.add_argument("d", type=int)
    c.add_argument("e", type=int)
    c.add_argument("m", help="comma separated tail, runs as 4^x7")
    c.add_argument("--max-moves", type=int, default=1000)
    c.set_defaults(func=cmd_class)

    s = sub.add_parser("mu", help="obstruction function of a class")
    s.add_argument("--class", dest="cls", type=_parse_class, required=True)
    s.add_argument("--a", type=_rational, required=True)
    s.add_argument("--b", type=_rational, required=True)
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("rf", help="rigid-flexible value RF(b)")
    s.add_argument("--b", type=_rational, required=True)
    s.set_defaults(func=cmd_rf)

    s = sub.add_parser("cb8", help="c_b(8)")
    s.add_argument("--b", type=_rational, required=True)
    s.set_defaults(func=cmd_cb8)

    s = sub.add_parser("rf-curve", help="RF(b) table for plotting")
    s.add_argument("--from", dest="b_from", type=_rational, required=True)
    s.add_argument("--to", dest="b_to", type=_rational, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rf_curve)

    s = sub.add_parser("search", help="certify no obstructive classes centered in (8, 9)")
    s.add_argument("--qmax", type=int, default=11)
    s.add_argument("--emax", type=int, default=40)
    s.add_argument("--jobs", type=int, default=_default_jobs())
    s.add_argument("--checkpoint")
    s.add_argument("--out")
    s.add_argument("--method", choices=("blocks", "extend"), default="blocks")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("reduce", help="reduction at a point")
    s.add_argument("--a", type=_rational, required=True)
    s.add_argument("--b", type=_rational, required=True)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--max-moves", type=int, default=200)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="volume-filling check on an (a, b) grid")
    s.add_argument("--a-from", type=_rational, default=Fraction(9))
    s.add_argument("--a-to", type=_rational, default=Fraction(16))
    s.add_argument("--a-step", type=_rational, default=Fraction(1, 4))
    s.add_argument("--b-list", default="1,5/4,3/2,7/4,2")
    s.add_argument("--max-moves", type=int, default=200)
    s.add_argument("--jobs", type=int, default=_default_jobs())
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"capcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except (UsageError, UnknownRFValue, ValueError) as exc:
        print(f"capcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
