"""Command line: analyze problem files, print catalog examples."""
from __future__ import annotations

import argparse
import sys

from .errors import SpecError
from .problem import EXAMPLES, example_text, parse_spec
from .runner import Report, run

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list) and len(v) > 6:
        return f"[{len(v)} items]"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def render_text(report: Report) -> str:
    spec = report.spec
    alg = spec["algebra"] if isinstance(spec["algebra"], str) else (
        spec["algebra"].get("name") or f"custom dim {spec['algebra']['dim']}")
    lines = [f"algebra: {alg}   phi: {spec['phi']['kind']}   X: {_fmt(spec['x'])}   "
             f"seed: {spec['seed']}"]
    if report.flags.get("loosened_tolerances"):
        lines.append("WARNING: tolerances loosened: " + ", ".join(report.flags["loosened_tolerances"]))
    for sec in report.sections:
        head = f"[{sec.status.upper():>14}] {sec.task}"
        if sec.wall_time is not None:
            head += f"  ({sec.wall_time:.2f}s)"
        lines.append(head)
        if sec.message:
            lines.append(f"    {sec.message}")
        for k, v in sec.values.items():
            if isinstance(v, dict):
                lines.append(f"    {k}: " + ", ".join(f"{a}={_fmt(b)}" for a, b in v.items()))
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f"    {k}:")
                for item in v:
                    lines.append("      " + ", ".join(f"{a}={_fmt(b)}" for a, b in item.items()))
            elif k != "k_prime_basis":
                lines.append(f"    {k}: {_fmt(v)}")
    lines.append(f"verdict: {report.verdict.upper()}")
    return "\n".join(lines) + "\n"


def emit(report: Report, fmt: str = "text") -> tuple:
    """Serialize a report; returns ``(bytes, exit_code)``."""
    text = report.to_machine() if fmt == "machine" else render_text(report)
    return text.encode("utf-8"), (EXIT_OK if report.verdict == "pass" else EXIT_FAIL)


def _cmd_analyze(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        spec = parse_spec(text)
    except SpecError as exc:
        for path, reason in exc.errors:
            print(f"error: {path}: {reason}", file=sys.stderr)
        return EXIT_FAIL if exc.validation else EXIT_IO
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    report = run(spec, timings=args.timings)
    data, code = emit(report, args.format)
    if args.output:
        try:
            with open(args.output, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return code


def _cmd_example(args) -> int:
    try:
        sys.stdout.write(example_text(args.name))
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_list(args) -> int:
    for name in EXAMPLES:
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphabeta",
        description="Left-invariant (alpha, beta)-metrics on Lie groups: regularity, "
                    "symmetry algebras and isometry checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the tasks of a problem file")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "machine"], default="text")
    p.add_argument("--seed", type=int, default=None, help="override the file's seed")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true",
                   help="record wall time per task (makes reports non-reproducible)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("example", help="print a catalog problem file")
    p.add_argument("name")
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("list-examples", help="list catalog problem files")
    p.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
