"""Command-line interface: ``torusbound <command> ...``.

Every command writes one JSON envelope to standard output (``figure`` may
write CSV instead; ``certify`` and ``obstruct`` print a text summary unless
``--json`` is given).  Exit codes: 0 success, 1 refutation or obstruction
found, 2 an Undecided verdict was encountered, 3 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import __version__, bounds, certify, lie, obstruct
from .exactnum import CERT_TRUE, DomainError, Interval, Verdict, enclose, mul
from .lie import ConsistencyError

SCHEMA_VERSION = "1"
DECIMAL_DIGITS = 25
ENVELOPE_BITS = 128

EXIT_OK, EXIT_FINDING, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Number formatting


def _scientific(mantissa: int, exp10: int, digits: int) -> str:
    s = str(abs(mantissa))
    sign = "-" if mantissa < 0 else ""
    e = exp10 + len(s) - 1
    body = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{sign}{body}e{e:+d}"


def decimal_bound(x: Fraction, digits: int, upward: bool) -> str:
    """``x`` rounded to ``digits`` significant digits toward +inf or -inf."""
    x = Fraction(x)
    if x == 0:
        return "0"
    e = len(str(abs(x.numerator))) - len(str(x.denominator))
    # shift so the integer part has exactly `digits` digits
    shift = digits - 1 - e
    scaled = x * Fraction(10) ** shift
    m = math.ceil(scaled) if upward else math.floor(scaled)
    if len(str(abs(m))) > digits:
        shift -= 1
        scaled = x * Fraction(10) ** shift
        m = math.ceil(scaled) if upward else math.floor(scaled)
    elif abs(scaled) < 10 ** (digits - 1):
        shift += 1
        scaled = x * Fraction(10) ** shift
        m = math.ceil(scaled) if upward else math.floor(scaled)
    # strip trailing zeros of the mantissa
    while m and m % 10 == 0 and len(str(abs(m))) > 1:
        m //= 10
        shift -= 1
    return _scientific(m, -shift, digits)


def exact_decimal(x: Fraction) -> str:
    """Exact decimal expansion of a rational with a terminating expansion; else ``p/q``."""
    x = Fraction(x)
    d = x.denominator
    a = b = 0
    while d % 2 == 0:
        d //= 2
        a += 1
    while d % 5 == 0:
        d //= 5
        b += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(a, b)
    scaled = x * 10 ** places
    digits = str(abs(scaled.numerator))
    sign = "-" if x < 0 else ""
    if places == 0:
        return sign + digits
    digits = digits.rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def interval_json(iv: Interval, digits: int = DECIMAL_DIGITS) -> dict:
    if iv.is_point and "/" not in (text := exact_decimal(iv.lo)):
        return {"lo": text, "hi": text, "exact": True}
    return {
        "lo": decimal_bound(iv.lo, digits, upward=False),
        "hi": decimal_bound(iv.hi, digits, upward=True),
        "exact": iv.is_point,
    }


def to_json(obj: Any) -> Any:
    """Lossless JSON form: integers as decimal strings, intervals as (lo, hi)."""
    if isinstance(obj, Verdict):
        return obj.label()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return exact_decimal(obj)
    if isinstance(obj, Interval):
        return interval_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_json(v) for v in items]
    if is_dataclass(obj):
        return {f.name: to_json(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(command: str, inputs: dict, result: Any, verdict: Verdict | str, ceiling: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "verdict": verdict.label() if isinstance(verdict, Verdict) else verdict,
        "precision": {"ceiling_bits": ceiling, "decimal_digits": DECIMAL_DIGITS},
    }


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _verdict_exit(v: Verdict, finding: bool = False) -> int:
    if v.is_undecided:
        return EXIT_UNDECIDED
    return EXIT_FINDING if finding else EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"eval {args.what} needs {', '.join(missing)}")


def cmd_eval(args, ceiling: int, out) -> int:
    what = args.what
    inputs: dict[str, Any] = {}
    verdict: Verdict = CERT_TRUE
    if what == "f0":
        _need(args, "n")
        inputs = {"n": args.n}
        result = {"n": args.n, "f0": str(bounds.f0(args.n))}
    elif what == "s":
        _need(args, "n")
        inputs = {"n": args.n}
        result = {"n": args.n, "s": str(bounds.s_of(args.n))}
    elif what == "envelope":
        _need(args, "n")
        inputs = {"n": args.n}
        result = {"n": args.n, "envelope": interval_json(bounds.theorem_a_envelope(args.n, ENVELOPE_BITS))}
    elif what == "s-alpha":
        _need(args, "alpha", "n")
        inputs = {"alpha": args.alpha, "n": args.n}
        result = {"alpha": args.alpha, "n": args.n, "s_alpha": interval_json(bounds.s_alpha(args.alpha, args.n, ENVELOPE_BITS))}
    elif what == "kappa":
        _need(args, "i")
        inputs = {"i": args.i}
        entry = bounds.kappa_sequence(args.i, ceiling)[args.i]
        verdict = entry.verdict
        result = {"i": args.i, "n": entry.n, "f0": str(entry.f0_value), "kappa": interval_json(entry.kappa)}
    elif what == "weyl":
        _need(args, "group")
        g = lie.GroupDescriptor.parse(args.group)
        inputs = {"group": args.group}
        result = {"group": args.group, "rank": g.rank, "weyl_order": str(lie.weyl_order(g))}
    elif what == "chi":
        _need(args, "space")
        sp = lie.parse_space(args.space)
        inputs = {"space": args.space}
        wq = lie.weyl_quotient(sp)
        result = {
            "space": lie.describe(sp),
            "dimension": lie.dimension(sp),
            "chi": str(lie.euler_characteristic(sp)),
            "weyl_quotient": None if wq is None else str(wq),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown eval target {what}")
    print(dumps(envelope(f"eval {what}", inputs, result, verdict, ceiling)), file=out)
    return _verdict_exit(verdict)


# ---------------------------------------------------------------------------
# table1


def table1_rows(max_i: int, ceiling: int) -> tuple[list[dict], Verdict]:
    rows = []
    overall = CERT_TRUE
    for entry in bounds.kappa_sequence(max_i, ceiling):
        row: dict[str, Any] = {
            "i": entry.index,
            "n": entry.n,
            "f0": str(entry.f0_value),
            "kappa": interval_json(entry.kappa),
            "width_target_met": entry.verdict.label(),
        }
        overall = overall & entry.verdict
        if 1 <= entry.index <= len(certify.TABLE1_KAPPA):
            printed = certify.TABLE1_KAPPA[entry.index - 1]
            tol = certify.KAPPA_REL_TOL
            within = Verdict.of(entry.kappa.lo * (1 - tol) <= printed <= entry.kappa.hi * (1 + tol))
            row["printed"] = decimal_bound(printed, DECIMAL_DIGITS, upward=False)
            row["printed_within_rel_tol"] = within.label()
            overall = overall & within
        rows.append(row)
    return rows, overall


def cmd_table1(args, ceiling: int, out) -> int:
    if args.max_i < 1:
        raise UsageError("--max-i must be >= 1")
    rows, verdict = table1_rows(args.max_i, ceiling)
    result = {"rows": rows, "relative_tolerance": exact_decimal(certify.KAPPA_REL_TOL)}
    print(dumps(envelope("table1", {"max_i": args.max_i}, result, verdict, ceiling)), file=out)
    if verdict.is_undecided:
        return EXIT_UNDECIDED
    return EXIT_OK if verdict.is_true else EXIT_FINDING


# ---------------------------------------------------------------------------
# certify


def report_json(report: certify.ClaimReport, timings: bool) -> dict:
    data = {
        "id": report.id,
        "alias": report.alias,
        "citation": report.citation,
        "statement": report.statement,
        "domain": report.domain,
        "expectation": report.expectation,
        "grid_size": report.grid_size,
        "counts": report.counts,
        "false_points": report.false_points,
        "undecided_points": report.undecided_points,
        "passed": report.passed,
        "details": to_json(report.details),
    }
    if timings:
        data["wall_time"] = round(report.wall_time, 3)
    return data


def cmd_certify(args, ceiling: int, out) -> int:
    try:
        suite = certify.run_suite(args.suite, ceiling, args.jobs)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    status = suite.exit_status
    verdict = {0: "pass", 1: "expectation-violated", 2: "undecided"}[status]
    if args.json:
        result = {
            "reports": [report_json(r, args.timings) for r in suite.reports],
            "exit_status": status,
        }
        inputs = {"suite": args.suite, "jobs_independent": True}
        print(dumps(envelope("certify", inputs, result, verdict, ceiling)), file=out)
    else:
        for r in suite.reports:
            mark = "PASS" if r.passed else "FAIL"
            c = r.counts
            line = f"{mark} {r.alias:>4} {r.id:<22} true={c['true']} false={c['false']} undecided={c['undecided']}"
            if r.false_points and len(r.false_points) <= 8:
                line += f" false_points={r.false_points}"
            if args.timings:
                line += f" [{r.wall_time:.2f}s]"
            print(line, file=out)
        print(f"suite: {verdict} (exit {status}, ceiling {ceiling} bits)", file=out)
    return status


# ---------------------------------------------------------------------------
# figure


def parse_range(text: str) -> range:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--range needs START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--range needs integers, got {text!r}") from None
    if step < 1:
        raise UsageError("--range step must be >= 1")
    if start < 2:
        raise UsageError("--range start must be >= 2")
    if stop < start:
        raise UsageError("--range stop must be >= start")
    return range(start, stop + 1, step)


FIGURE_COLUMNS = ("n", "f0", "envelope_lo", "envelope_hi", "ref_exponential")


def figure_rows(which: int, ns: Sequence[int]) -> list[dict]:
    index = 1 if which == 1 else 6
    n_i = bounds.n_sequence(index)[index]
    if which == 2 and ns[0] < n_i:
        raise UsageError(f"figure 2 starts at n_6 = {n_i}")
    bad = [n for n in ns if n < 54 and n % 2]
    if bad:
        raise UsageError(f"f0 is undefined at odd n < 54 (first: {bad[0]})")
    kappa_scale = Fraction(bounds.f0(n_i))
    base = bounds.envelope_expr(n_i)
    rows = []
    for n in ns:
        # kappa_i * env(n) = f0(n_i) * env(n) / env(n_i)
        scaled = enclose(mul(kappa_scale, bounds.envelope_expr(n) / base), ENVELOPE_BITS)
        rows.append({
            "n": n,
            "f0": str(bounds.f0(n)),
            "envelope_lo": decimal_bound(scaled.lo, DECIMAL_DIGITS, upward=False),
            "envelope_hi": decimal_bound(scaled.hi, DECIMAL_DIGITS, upward=True),
            "ref_exponential": exact_decimal(bounds.reference_exponential(n)),
        })
    return rows


def cmd_figure(args, ceiling: int, out) -> int:
    ns = parse_range(args.range)
    rows = figure_rows(args.which, ns)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=FIGURE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        inputs = {"which": args.which, "range": args.range}
        result = {"columns": list(FIGURE_COLUMNS), "rows": rows, "kappa_index": 1 if args.which == 1 else 6}
        print(dumps(envelope("figure", inputs, result, CERT_TRUE, ceiling)), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# obstruct


def _structure(args) -> obstruct.Structure:
    kind = args.structure
    if kind == "euler":
        if args.chi is None:
            raise UsageError("obstruct euler needs --chi")
        return obstruct.Euler(args.chi)
    if kind == "product":
        if args.k is None or (args.chi_factor is None and args.space is None):
            raise UsageError("obstruct product needs --k and --chi-factor or --space")
        factor = lie.parse_space(args.space) if args.space else None
        return obstruct.ProductPower(args.k, args.chi_factor, factor)
    if kind == "connsum":
        if args.k is None or args.chi_factor is None:
            raise UsageError("obstruct connsum needs --k and --chi-factor")
        return obstruct.ConnectedSum(args.chi_factor, args.k)
    if kind == "symmspace":
        if args.ss_rank is None:
            raise UsageError("obstruct symmspace needs --ss-rank")
        return obstruct.SymmetricSpace(args.ss_rank)
    if kind == "tower":
        if not args.fibers:
            raise UsageError("obstruct tower needs --fibers")
        try:
            chis = tuple(int(x) for x in args.fibers.split(","))
        except ValueError:
            raise UsageError(f"--fibers needs integers, got {args.fibers!r}") from None
        return obstruct.FibrationTower(chis)
    if args.spin == args.b2b4zero:
        raise UsageError("obstruct genus needs exactly one of --spin / --b2b4zero")
    return obstruct.EllipticGenus(args.spin, args.b2b4zero)


def entry_json(e: obstruct.Entry) -> dict:
    return {
        "theorem": e.theorem,
        "applicable": e.applicable.label(),
        "obstructed": e.obstructed.label(),
        "witness": e.witness,
        "values": to_json(e.values),
        "notes": list(e.notes),
    }


def cmd_obstruct(args, ceiling: int, out) -> int:
    structure = _structure(args)
    query = obstruct.ObstructionQuery(args.n, args.rank, structure, not args.not_simply_connected)
    report = obstruct.analyze(query, ceiling)
    verdict = report.obstructed
    if args.json:
        inputs = {
            "structure": args.structure,
            "n": args.n,
            "rank": args.rank,
            "simply_connected": not args.not_simply_connected,
            "data": to_json(structure),
        }
        result = {"entries": [entry_json(e) for e in report.entries], "flags": report.flags}
        print(dumps(envelope(f"obstruct {args.structure}", inputs, result, verdict, ceiling)), file=out)
    else:
        for e in report.entries:
            print(f"{e.theorem}: applicable={e.applicable} obstructed={e.obstructed}", file=out)
            print(f"  {e.witness}", file=out)
            for note in e.notes:
                print(f"  note: {note}", file=out)
        for flag in report.flags:
            print(f"flag: {flag}", file=out)
        print(f"obstructed: {verdict}", file=out)
    return _verdict_exit(verdict, finding=verdict.is_true)


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torusbound", description="Certified bounds for torus actions in positive curvature.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate one bound function")
    e.add_argument("what", choices=["f0", "s", "envelope", "s-alpha", "kappa", "weyl", "chi"])
    e.add_argument("--n", type=int)
    e.add_argument("--alpha", type=int)
    e.add_argument("--i", type=int)
    e.add_argument("--group")
    e.add_argument("--space")

    t = sub.add_parser("table1", help="reproduce the n_i / kappa_i table")
    t.add_argument("--max-i", type=int, default=6)

    c = sub.add_parser("certify", help="run the claim registry")
    c.add_argument("--suite", default="all", help="'all' or comma-separated claim ids / aliases")
    c.add_argument("--precision", type=int, help="precision ceiling in bits")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--json", action="store_true")
    c.add_argument("--timings", action="store_true", help="include wall times (output no longer byte-stable)")

    f = sub.add_parser("figure", help="emit figure data")
    f.add_argument("--which", type=int, choices=[1, 2], required=True)
    f.add_argument("--range", required=True, help="START:STOP:STEP, inclusive")
    f.add_argument("--format", choices=["csv", "json"], default="csv")

    o = sub.add_parser("obstruct", help="check manifold data against the obstructions")
    o.add_argument("structure", choices=["euler", "product", "connsum", "symmspace", "tower", "genus"])
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--rank", type=int, required=True)
    o.add_argument("--chi", type=int)
    o.add_argument("--chi-factor", type=int)
    o.add_argument("--space", help="factor space for products, e.g. S:2 or GR:2:4")
    o.add_argument("--k", type=int)
    o.add_argument("--ss-rank", type=int)
    o.add_argument("--fibers")
    o.add_argument("--spin", action="store_true")
    o.add_argument("--b2b4zero", action="store_true")
    o.add_argument("--not-simply-connected", action="store_true")
    o.add_argument("--json", action="store_true")
    return p


COMMANDS = {
    "eval": cmd_eval,
    "table1": cmd_table1,
    "certify": cmd_certify,
    "figure": cmd_figure,
    "obstruct": cmd_obstruct,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ceiling = certify.default_ceiling()
        if getattr(args, "precision", None) is not None:
            if args.precision < 1:
                raise UsageError("--precision must be positive")
            ceiling = args.precision
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        return COMMANDS[args.command](args, ceiling, out)
    except (UsageError, DomainError, ConsistencyError, ValueError) as exc:
        print(f"torusbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
