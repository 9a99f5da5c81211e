"""Command-line interface: gen, analyze, verify-conjecture, construct, export.

Exit codes: 0 success, 2 input error, 3 degenerate quadrisecant set,
4 construction loop failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .approximation import _decimal, approximate, polygon_to_obj
from .catalog import BUILTIN_NAMES, builtin_knot
from .classify import MAX_CROSSINGS
from .errors import InputError, KnotFormatError, QuadlabError
from .exact import as_rational
from .knot import knot_from_json, knot_to_json
from .pipeline import render_text, run_pipeline
from .quadrisecants import find_all_quadrisecants

CONSTRUCTIONS = ("k-star", "k-diamond", "subdivided-diamond")
EXPORT_FORMATS = ("obj", "csv", "json")


def default_seed() -> int:
    raw = os.environ.get("QUADLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"QUADLAB_SEED must be an integer, got {raw!r}") from exc


def _read_json(path):
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise KnotFormatError(f"{path}: invalid JSON ({exc})") from exc


def _read_knot(path):
    """A knot file, a builtin name prefixed with ``builtin:``, or a report's input knot."""
    if str(path).startswith("builtin:"):
        return builtin_knot(str(path)[len("builtin:"):])
    data = _read_json(path)
    if isinstance(data, dict) and "input" in data and "vertices" not in data:
        data = data["input"]
    return knot_from_json(data)


def _emit(text: str, output):
    if output in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# subcommands ------------------------------------------------------------------


def cmd_gen(args) -> int:
    knot = builtin_knot(args.name)
    _emit(_dump(knot_to_json(knot)), args.output)
    return 0


def _analyze(args):
    knot = _read_knot(args.input)
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    return run_pipeline(knot, skip_classify=args.skip_classify, max_crossings=args.max_crossings,
                        workers=threads, seed=args.seed)


def cmd_analyze(args) -> int:
    report = _analyze(args)
    data = report.to_json(include_timing=not args.no_timing)
    if args.format == "text":
        _emit(render_text(data), args.output)
    else:
        _emit(_dump(data), args.output)
    return report.exit_code


def cmd_verify(args) -> int:
    report = _analyze(args)
    if args.report:
        Path(args.report).write_text(_dump(report.to_json(include_timing=not args.no_timing)) + "\n")
    reason = ""
    if report.errors:
        stage, err = next(iter(report.errors.items()))
        reason = f" ({stage}: {err})"
    print(f"{report.verdict}{reason}")
    return report.exit_code


def cmd_construct(args) -> int:
    from .connectsum import build_K_diamond, build_K_star, build_subdivided_diamond

    knot = _read_knot(args.input)
    eta = as_rational(args.eta) if args.eta is not None else None
    builder = {"k-star": build_K_star, "k-diamond": build_K_diamond,
               "subdivided-diamond": build_subdivided_diamond}[args.kind]
    kwargs = {"seed": args.seed}
    if args.no_verify:
        kwargs["verify_outcome"] = False
    result = builder(knot, eta, **kwargs)
    _emit(_dump(knot_to_json(result.knot)), args.output)
    transcript = {"input": knot.name, "edges_in": knot.n, "edges_out": result.knot.n, **result.transcript}
    if args.transcript:
        Path(args.transcript).write_text(_dump(transcript) + "\n")
    elif args.output not in (None, "-"):
        Path(str(args.output) + ".transcript.json").write_text(_dump(transcript) + "\n")
    print(f"{args.kind}: {knot.n} -> {result.knot.n} edges", file=sys.stderr)
    return 0


def cmd_export(args) -> int:
    data = _read_json(args.input)
    is_report = isinstance(data, dict) and "input" in data and "vertices" not in data
    digits = args.precision
    if digits < 1:
        raise InputError("precision must be a positive number of significant digits")
    if args.format == "json":
        _emit(_dump(data), args.output)
        return 0
    knot = knot_from_json(data["input"] if is_report else data)
    if args.format == "obj":
        target = approximate(knot) if is_report else knot
        _emit(polygon_to_obj(target, digits), args.output)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if is_report:
        writer.writerow(["line", "edge", "parameter", "x", "y", "z"])
        for index, quad in enumerate(find_all_quadrisecants(knot)):
            for rec in quad.secants:
                writer.writerow([index, rec.edge, _decimal(rec.parameter, digits),
                                 *(_decimal(c, digits) for c in rec.point)])
    else:
        writer.writerow(["vertex", "x", "y", "z"])
        for index, v in enumerate(knot.vertices):
            writer.writerow([index, *(_decimal(c, digits) for c in v)])
    _emit(buf.getvalue(), args.output)
    return 0


# parser -----------------------------------------------------------------------


def _add_analysis_flags(p, seed):
    p.add_argument("input", help="knot JSON file, '-' for stdin, or builtin:NAME")
    p.add_argument("--skip-classify", action="store_true", help="skip the Jones polynomial stage")
    p.add_argument("--max-crossings", type=int, default=MAX_CROSSINGS,
                   help=f"crossing cap for the bracket state sum (default {MAX_CROSSINGS})")
    p.add_argument("--no-timing", action="store_true", help="omit stage timings (byte-stable output)")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: logical cores)")
    p.add_argument("--seed", type=int, default=seed, help="seed for projection sampling (env QUADLAB_SEED)")


def build_parser() -> argparse.ArgumentParser:
    seed = default_seed()
    parser = argparse.ArgumentParser(prog="quadlab", description="Quadrisecants of polygonal knots.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a built-in knot as JSON")
    p.add_argument("name", help=f"one of: {', '.join(BUILTIN_NAMES)}")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="run the full pipeline and print the report")
    _add_analysis_flags(p, seed)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-conjecture", help="analyze and print a one-line verdict")
    _add_analysis_flags(p, seed)
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build K-star, K-diamond or the subdivided K-diamond")
    p.add_argument("kind", choices=CONSTRUCTIONS)
    p.add_argument("input", help="guest knot JSON file or builtin:NAME")
    p.add_argument("--eta", help="split distance as a rational, e.g. 1/1000 (default: chosen by the shrink loop)")
    p.add_argument("--seed", type=int, default=seed, help="perturbation seed (env QUADLAB_SEED)")
    p.add_argument("--no-verify", action="store_true", help="skip the outcome check on the approximation")
    p.add_argument("-o", "--output", help="output knot path (default stdout)")
    p.add_argument("--transcript", help="transcript path (default OUTPUT.transcript.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("export", help="convert a knot or report to OBJ, CSV or JSON")
    p.add_argument("input", help="knot or report JSON")
    p.add_argument("--format", choices=EXPORT_FORMATS, required=True)
    p.add_argument("--precision", type=int, default=15, help="significant digits (default 15)")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except QuadlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)


if __name__ == "__main__":
    sys.exit(main())
