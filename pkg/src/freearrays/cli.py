"""Command-line front end.

Exit codes: 0 when at least one solution was found, 2 when none, 1 on any
error (parse errors, budget overruns, unchecked delayed constraints).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .asm import format_program, parse_program
from .errors import FreeArrayError
from .listings import corpus_names, corpus_source
from .search import SearchConfig, SearchEngine
from .solver import DEFAULT_INT_RANGE, DEFAULT_MAX_LEN, Strategy

log = logging.getLogger("freearrays")


def _read_source(spec: str) -> tuple[str, str]:
    path = Path(spec)
    if path.exists():
        return path.read_text(), path.stem
    name = spec[len("corpus:"):] if spec.startswith("corpus:") else spec
    if name.endswith(".fal"):
        name = name[:-4]
    if name in corpus_names():
        return corpus_source(name), name
    raise FileNotFoundError(f"no such program file or corpus entry: {spec}")


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freearrays", description="Run free-array search programs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run encapsulated search and print all solutions")
    run.add_argument("program", help="path to a .fal file, or the name of a bundled corpus program")
    run.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.SYMBOLIC.value)
    run.add_argument("--max-len", type=_non_negative, default=DEFAULT_MAX_LEN,
                     help="upper bound on free array lengths (default %(default)s)")
    run.add_argument("--max-solutions", type=_positive, default=None)
    run.add_argument("--format", choices=["text", "json"], default="text")
    run.add_argument("--check", action="store_true", help="re-verify every solution by concrete evaluation")
    run.add_argument("--stats", action="store_true")
    run.add_argument("--step-budget", type=_positive, default=10**6)
    run.add_argument("--enum-budget", type=_positive, default=10**6)
    run.add_argument("--int-range", type=int, nargs=2, metavar=("LO", "HI"), default=list(DEFAULT_INT_RANGE),
                     help="default domain of free ints and array elements (default %(default)s)")
    run.add_argument("--no-label", dest="label", action="store_false",
                     help="report symbolic solutions without labeling them")

    fmt = sub.add_parser("fmt", help="parse a program and print it in canonical form")
    fmt.add_argument("program")

    sub.add_parser("corpus", help="list bundled corpus programs")
    return parser


def _text_record(rec) -> str:
    parts = [rec.kind, str(rec.value) if not isinstance(rec.value, list) else json.dumps(rec.value)]
    if rec.bindings:
        parts.append("bindings: " + ", ".join(f"{k}={v}" for k, v in rec.bindings.items()))
    if rec.arrays:
        parts.append("arrays: " + ", ".join(f"{k}={json.dumps(v)}" for k, v in rec.arrays.items()))
    if rec.kind == "value" and rec.symbolic:
        parts.append(f"return: {rec.symbolic}")
    if rec.constraints:
        parts.append("constraints: " + "; ".join(rec.constraints))
    return "  ".join(parts)


def run(args, out=None) -> int:
    out = out or sys.stdout
    source, name = _read_source(args.program)
    program = parse_program(source, name)
    lo, hi = args.int_range
    if lo > hi:
        raise FreeArrayError(f"empty --int-range [{lo}, {hi}]")
    config = SearchConfig(strategy=Strategy(args.strategy), max_solutions=args.max_solutions,
                          max_len=args.max_len, step_budget=args.step_budget,
                          enum_budget=args.enum_budget, label_on_solution=args.label,
                          int_range=(lo, hi), check=args.check)
    engine = SearchEngine(program, config)
    count = 0
    for rec in engine.solutions():
        count += 1
        if args.check and rec.checked is False:
            raise FreeArrayError(f"solution {count} failed the concrete check: {rec.as_dict()}")
        if args.format == "json":
            print(json.dumps(rec.as_dict()), file=out)
        else:
            print(_text_record(rec), file=out)
    if args.stats:
        stats = engine.all_stats()
        if args.format == "json":
            print(json.dumps({"kind": "stats", "stats": stats}), file=out)
        else:
            print("# stats: " + " ".join(f"{k}={v}" for k, v in stats.items()), file=out)
    return 0 if count else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return run(args)
        if args.command == "fmt":
            source, name = _read_source(args.program)
            sys.stdout.write(format_program(parse_program(source, name)))
            return 0
        for name in corpus_names():
            print(name)
        return 0
    except (FreeArrayError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
