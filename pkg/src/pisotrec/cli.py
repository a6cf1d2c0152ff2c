"""Command-line front end: generate | guess | decide | families | scan."""
import argparse
import csv
import json
import io
import sys
from dataclasses import replace
from fractions import Fraction

from .decide import DEFAULT_CHECK_LIMIT, decide, end_to_end
from .families import load_templates, verify_family
from .guess import InsufficientPrefix, LinearRecurrence, NotFound, guess_recurrence
from .roots import PRECISION_CAP
from .scan import scan
from .sequence import PisotParams, PivotVanished, generate, parse_rational, read_bfile


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _int_range(text):
    """"5" -> range(5, 6); "5..40" or "5:40" -> inclusive range."""
    for sep in ("..", ":"):
        if sep in text:
            a, b = text.split(sep, 1)
            return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)


def _int_list(text):
    return [int(v) for v in text.replace(" ", "").split(",") if v]


def _add_sequence_args(p, ranges=False):
    kind = _int_range if ranges else int
    p.add_argument("--x", type=kind, required=True)
    p.add_argument("--y", type=kind)
    p.add_argument("--r", type=_rational, default=Fraction(1, 2), help="index r as p/q (default 1/2)")
    if not ranges:
        p.add_argument("--s", type=int, default=1, help="order of the Pisot sequence (default 1)")
        p.add_argument("--initial", type=_int_list, default=[],
                       help="extra initial terms a_2..a_{2s-1} for s > 1, comma separated")


def build_parser():
    parser = argparse.ArgumentParser(prog="pisotrec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="print terms of E_r(x, y)")
    _add_sequence_args(g)
    g.add_argument("--print", type=int, default=20, dest="count", help="number of terms")
    g.add_argument("--format", choices=("json", "bfile"), default="bfile")
    g.add_argument("--out")

    q = sub.add_parser("guess", help="guess a recurrence from E_r(x, y) or a b-file")
    _add_sequence_args(q)
    q.add_argument("--bfile", help="read terms from an OEIS b-file instead of generating")
    q.add_argument("--max-order", type=int, default=12)
    q.add_argument("--print", type=int, default=0, dest="count",
                   help="prefix length used (default 4*max-order+8)")
    q.add_argument("--out")

    d = sub.add_parser("decide", help="guess a recurrence and prove or disprove it")
    _add_sequence_args(d)
    d.add_argument("--max-order", type=int, default=12)
    d.add_argument("--print", type=int, default=0, dest="print_terms",
                   help="include this many terms in the report (verbose mode)")
    d.add_argument("--check", type=int, default=DEFAULT_CHECK_LIMIT)
    d.add_argument("--precision-cap", type=int, default=PRECISION_CAP)
    d.add_argument("--recurrence", help='decide this recurrence instead, as [[d_1..d_k],[A_1..A_k]]')
    d.add_argument("--out")

    f = sub.add_parser("families", help="verify the parametric family templates")
    f.add_argument("--templates", help="JSON template file (default: bundled)")
    f.add_argument("--x", type=int, help="only templates with this x")
    f.add_argument("--max-order", type=int, default=12)
    f.add_argument("--check", type=int, default=DEFAULT_CHECK_LIMIT)
    f.add_argument("--format", choices=("json", "csv"), default="json")
    f.add_argument("--out")

    s = sub.add_parser("scan", help="decide every (x, y) in a grid and write CSV")
    _add_sequence_args(s, ranges=True)
    s.add_argument("--max-order", type=int, default=12)
    s.add_argument("--check", type=int, default=DEFAULT_CHECK_LIMIT)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--format", choices=("csv",), default="csv")
    return parser


def _params(args, parser):
    if args.y is None:
        parser.error("--y is required")
    try:
        return PisotParams(args.x, args.y, args.r, args.s, tuple(args.initial))
    except ValueError as exc:
        parser.error(str(exc))


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    # terms of long prefixes run to tens of thousands of digits
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, parser)
    except OSError as exc:
        print(f"pisotrec: {exc}", file=sys.stderr)
        return 1


def _run(args, parser):
    if args.command == "generate":
        params = _params(args, parser)
        if args.count < 2 * params.order_s:
            parser.error(f"--print must be at least {2 * params.order_s}")
        try:
            prefix = generate(params, args.count)
        except PivotVanished as exc:
            print(f"pisotrec: {exc}; printing the {len(exc.prefix)} defined terms", file=sys.stderr)
            prefix = exc.prefix
        _emit(prefix.to_json() + "\n" if args.format == "json" else prefix.to_bfile(), args.out)
        return 0

    if args.command == "guess":
        if args.bfile:
            with open(args.bfile) as fh:
                terms = read_bfile(fh.read())
        else:
            params = _params(args, parser)
            count = args.count or 4 * args.max_order + 8
            try:
                terms = generate(params, count).terms
            except PivotVanished as exc:
                terms = exc.prefix.terms
        try:
            rec = guess_recurrence(terms, args.max_order)
        except InsufficientPrefix as exc:
            parser.error(str(exc))
        except NotFound as exc:
            _emit(json.dumps({"recurrence": None, "reason": str(exc)}) + "\n", args.out)
            return 0
        _emit(json.dumps({"recurrence": rec.to_pair(), "order": rec.order_k}) + "\n", args.out)
        return 0

    if args.command == "decide":
        params = _params(args, parser)
        kwargs = {"precision_cap": args.precision_cap}
        if args.recurrence:
            try:
                rec = LinearRecurrence.from_json(args.recurrence)
            except (ValueError, TypeError) as exc:
                parser.error(f"bad --recurrence: {exc}")
            report = decide(params, rec, args.check, **kwargs)
            if args.print_terms:
                count = max(args.print_terms, 2 * params.order_s)
                report = replace(report, terms=generate(params, count).terms[: args.print_terms])
        else:
            report = end_to_end(params, args.max_order, args.print_terms, args.check, **kwargs)
        _emit(report.to_json() + "\n", args.out)
        return 0

    if args.command == "families":
        templates = load_templates(args.templates)
        if args.x is not None:
            templates = [t for t in templates if t.x == args.x]
        results = []
        for t in templates:
            for row in verify_family(t, args.max_order, args.check):
                results.append({
                    "template": t.name, "k": row.k, "y": row.y, "status": row.status,
                    "verdict": row.verdict,
                    "expected": None if row.expected is None else row.expected.to_pair(),
                    "guessed": None if row.guessed is None else row.guessed.to_pair(),
                })
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf)
            w.writerow(["template", "k", "y", "status", "verdict"])
            for r in results:
                w.writerow([r["template"], r["k"], r["y"], r["status"], r["verdict"] or ""])
            _emit(buf.getvalue(), args.out)
        else:
            _emit(json.dumps(results, indent=2) + "\n", args.out)
        failed = [r for r in results if r["status"] not in ("pass", "skipped")]
        return 0 if not failed else 3

    if args.command == "scan":
        if args.y is None:
            parser.error("--y is required (a value or a range such as 5..40)")
        records = scan(args.x, args.y, args.r, args.max_order, args.check, args.out, args.jobs)
        print(f"{len(records)} records written to {args.out}", file=sys.stderr)
        return 0
    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
