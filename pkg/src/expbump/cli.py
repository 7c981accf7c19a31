"""Command-line front end.

    expbump coeffs --max-order 5 --format csv
    expbump eval --fn h --order 2 --points 0.5,1,2
    expbump limits --fn g
    expbump verify --kind cm --fn h --interval 0:inf
    expbump pou --cover cover.json --num-points 11 --order 2

Exit codes: 0 success or verified, 1 verification or coverage failure,
2 usage or parse error.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .coeffs import coeff_triangle, triangle_to_csv, triangle_to_json
from .derivatives import (
    FunctionId,
    Side,
    Status,
    eval_derivative,
    format_float,
    limit_at_zero,
    trace_csv,
)
from .monotonicity import IntervalSpec, check_am, check_cm, check_lcm
from .pou import MAX_JET_ORDER, Cover, CoverageError, pou_over_cover, uniform_points

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _points(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part))
        except ValueError:
            raise UsageError(f"not a number in --points: {part!r}") from None
    return out


def _json_num(x: float):
    return x if math.isfinite(x) else format_float(x)


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[c]) for r in rows)) if rows else len(h)
              for c, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _csv_to_table(text: str) -> str:
    rows = list(csv.reader(io.StringIO(text)))
    return _table(rows[0], rows[1:])


def run_coeffs(args) -> int:
    tri = coeff_triangle(args.max_order)
    if args.format == "json":
        sys.stdout.write(triangle_to_json(tri))
    elif args.format == "table":
        sys.stdout.write(_csv_to_table(triangle_to_csv(tri)))
    else:
        sys.stdout.write(triangle_to_csv(tri))
    return EXIT_OK


def run_eval(args) -> int:
    fn = FunctionId.parse(args.fn)
    pts = _points(args.points)
    rows = [(fn, args.order, t, eval_derivative(fn, args.order, t)) for t in pts]
    if args.format == "json":
        out = []
        for fn_, i, t, r in rows:
            sign, log_mag = r.log_form if r.log_form is not None else (None, None)
            out.append({
                "fn": fn_.value, "i": i, "t": _json_num(t), "value": _json_num(r.value),
                "status": r.status.value, "sign": sign,
                "log_magnitude": None if log_mag is None else _json_num(log_mag),
            })
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    elif args.format == "table":
        sys.stdout.write(_csv_to_table(trace_csv(rows)))
    else:
        sys.stdout.write(trace_csv(rows))
    for *_, r in rows:
        if r.status is Status.UNDEFINED_AT_ZERO:
            print(f"note: {fn.value} is undefined at t = 0", file=sys.stderr)
            break
    return EXIT_OK


def run_limits(args) -> int:
    fn = FunctionId.parse(args.fn)
    if fn is FunctionId.F:
        raise UsageError("f is continuous at 0; limits applies to g and h")
    sides = [Side.parse(args.side)] if args.side else [Side.LEFT, Side.RIGHT]
    results = [limit_at_zero(fn, s) for s in sides]
    if args.format == "json":
        out = [{
            "function": r.function.value, "side": r.side.value, "limit": r.limit.value,
            "evidence": [{"t": t, "value": _json_num(v)} for t, v in r.evidence],
        } for r in results]
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    else:
        header = ["function", "side", "limit"]
        rows = [[r.function.value, r.side.value, r.limit.value] for r in results]
        if args.format == "table":
            sys.stdout.write(_table(header, rows))
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
            sys.stdout.write(buf.getvalue())
    return EXIT_OK


def run_verify(args) -> int:
    fn = FunctionId.parse(args.fn)
    try:
        interval = IntervalSpec.parse(args.interval)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kind = args.kind.lower()
    max_order = args.max_order if args.max_order is not None else (30 if kind == "lcm" else 20)
    if args.reciprocal and kind != "lcm":
        raise UsageError("--reciprocal only applies to --kind lcm")
    exact = not args.sampled_only
    try:
        if kind == "cm":
            report = check_cm(fn, interval, max_order, args.samples, exact=exact)
        elif kind == "am":
            report = check_am(fn, interval, max_order, args.samples, exact=exact)
        else:
            report = check_lcm(fn, interval, max_order, args.samples,
                               reciprocal=args.reciprocal, exact=exact)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(report.to_json())
    return EXIT_OK if report.verdict.ok else EXIT_FAILED


def run_pou(args) -> int:
    try:
        with open(args.cover) as fh:
            cover = Cover.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read cover file: {exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed cover file {args.cover}: {exc}") from None
    if args.points:
        pts = _points(args.points)
    else:
        pts = uniform_points(cover, args.num_points)
    try:
        ev = pou_over_cover(cover, pts, args.order)
    except CoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.format == "json":
        out = [{"x": x, "patch_index": j, "weight": ds[0],
                "derivatives": [_json_num(d) for d in ds[1:]]}
               for x, j, *ds in ev.to_rows()]
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    elif args.format == "table":
        sys.stdout.write(_csv_to_table(ev.to_csv()))
    else:
        sys.stdout.write(ev.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expbump",
        description="Exact derivatives of exp(+-1/t), monotonicity checks and "
                    "smooth partitions of unity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = dict(choices=["csv", "json", "table"], default="csv")

    p = sub.add_parser("coeffs", help="coefficient triangle a(i,k)")
    p.add_argument("--max-order", type=_positive_int, default=10)
    p.add_argument("--format", **fmt)
    p.set_defaults(run=run_coeffs)

    p = sub.add_parser("eval", help="evaluate f, g or h derivatives")
    p.add_argument("--fn", required=True, choices=["f", "g", "h"])
    p.add_argument("--order", type=_nonneg_int, default=0)
    p.add_argument("--points", required=True, help="comma separated t values, e.g. -1,0.5,2")
    p.add_argument("--format", **fmt)
    p.set_defaults(run=run_eval)

    p = sub.add_parser("limits", help="one-sided limits at t = 0")
    p.add_argument("--fn", required=True, choices=["f", "g", "h"])
    p.add_argument("--side", choices=["left", "right"])
    p.add_argument("--format", **fmt)
    p.set_defaults(run=run_limits)

    p = sub.add_parser("verify", help="CM / AM / LCM check, JSON report")
    p.add_argument("--kind", required=True, choices=["cm", "am", "lcm"])
    p.add_argument("--fn", required=True, choices=["f", "g", "h"])
    p.add_argument("--interval", required=True, help="a:b, inf and -inf allowed")
    p.add_argument("--max-order", type=_nonneg_int)
    p.add_argument("--samples", type=_positive_int, default=200)
    p.add_argument("--reciprocal", action="store_true", help="check 1/fn (lcm only)")
    p.add_argument("--sampled-only", action="store_true",
                   help="skip the exact sign argument")
    p.set_defaults(run=run_verify)

    p = sub.add_parser("pou", help="partition-of-unity weights over a JSON cover")
    p.add_argument("--cover", required=True, help="JSON file {domain: [A, B], patches: [...]}")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--points", help="comma separated x values")
    grp.add_argument("--num-points", type=_positive_int, default=11)
    p.add_argument("--order", type=_nonneg_int, default=0)
    p.add_argument("--format", **fmt)
    p.set_defaults(run=run_pou)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--interval -inf:0`` into ``--interval=-inf:0`` so argparse
    does not read the value as an option; same for ``--points -1e-3``."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in ("--interval", "--points") and nxt is not None and nxt.startswith("-") \
                and not nxt.startswith("--"):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    if getattr(args, "order", 0) > MAX_JET_ORDER and args.command == "pou":
        parser.error(f"--order must be <= {MAX_JET_ORDER} for pou")
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
