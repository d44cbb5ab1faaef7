"""Command-line front end: ``idealforge <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import construct as build
from .enumerate import DEFAULT_MAX_N, MAX_N, build_tables, dump_json
from .ideals import count_antichains, count_ideals, count_ideals_bruteforce
from .poset import PosetError, format_poset, parse_poset, to_dot
from .sequences import A_LIMIT, compare_report, format_report
from .topology import (
    format_topology,
    parse_topology,
    t0_collapse,
    topology_from_preorder,
)
from .verify import DEFAULT_SEED, run_suite

EXTENDED_N = 8  # search depth above which --extended is required

COUNTERS = {"elim": count_ideals, "brute": count_ideals_bruteforce, "antichain": count_antichains}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _integer(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _positive(text: str) -> int:
    value = _integer(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def cmd_construct(args) -> int:
    k = args.k
    if args.min_nbhd is not None:
        pre = build.construct_min_neighborhood(k, args.min_nbhd)
        sys.stdout.write(format_topology(topology_from_preorder(pre)))
        print(f"# open sets = {k}")
        print(f"# min neighbourhood >= {args.min_nbhd}")
        return 0
    c = build.construct(k, args.strategy)
    footer = [f"j = {k}", f"strategy = {c.strategy}", f"elements = {c.size}"]
    if args.trace:
        for step in c.trace:
            footer.append(f"step {step.consumed}: j = {step.prefix} ({bin(step.prefix)[2:]}) "
                          f"with {step.size} elements {step.note}".rstrip())
    sys.stdout.write(format_poset(c.poset, footer))
    if args.dot:
        _write(args.dot, to_dot(c.poset, name=f"P{k}"))
    return 0


def cmd_count(args) -> int:
    p = parse_poset(_read(args.file))
    print(COUNTERS[args.method](p))
    return 0


def cmd_search(args) -> int:
    if args.max_n > EXTENDED_N and not args.extended:
        print(f"error: --max-n above {EXTENDED_N} takes minutes; pass --extended", file=sys.stderr)
        return 1
    table = build_tables(args.max_n, verbose=args.extended)
    if args.json:
        dump_json(table, args.json)
        return 0
    print(f"certified through n = {table.depth}")
    print("f(n): " + ", ".join(f"{n}:{k}" for n, k in table.f.items()))
    m = table.m
    print("m(k): " + ", ".join(f"{k}:{m[k]}" for k in sorted(m) if k <= 64))
    return 0


def cmd_sequences(args) -> int:
    if args.limit > A_LIMIT:
        print(f"error: --limit is capped at {A_LIMIT}", file=sys.stderr)
        return 1
    depth = min(args.max_n, MAX_N)
    rows = compare_report(args.limit, build_tables(depth).m)
    if args.json:
        print(json.dumps([{"k": r.k, "m": r.m, "a": r.a, "b": r.b} for r in rows], indent=1))
    else:
        sys.stdout.write(format_report(rows))
    return 0


def cmd_verify(args) -> int:
    def report(c):
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {c.detail}".rstrip())
    checks = run_suite(args.seed, args.scale, report)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed (seed {args.seed})")
    return 0 if not failed else 1


def cmd_collapse(args) -> int:
    t = parse_topology(_read(args.file))
    t0, proj = t0_collapse(t)
    sys.stdout.write(format_topology(t0))
    print("# classes = " + " ".join(str(c) for c in proj))
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="idealforge", description="Posets and finite topologies with a prescribed number of ideals.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a poset with exactly k ideals")
    p.add_argument("k", type=_integer)
    p.add_argument("--strategy", default="auto", choices=("auto",) + build.STRATEGIES)
    p.add_argument("--min-nbhd", type=_positive, metavar="M",
                   help="emit a topology whose minimal neighbourhoods have at least M points")
    p.add_argument("--dot", metavar="FILE", help="also write the Hasse diagram as DOT ('-' for stdout)")
    p.add_argument("--trace", action="store_true", help="log the prefix counts as comments")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("count", help="count the order ideals of a poset file")
    p.add_argument("file", help="poset text file, or '-' for stdin")
    p.add_argument("--method", default="elim", choices=sorted(COUNTERS))
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("search", help="exhaustive m(k) and f(n) tables")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, choices=range(0, MAX_N + 1), metavar="N")
    p.add_argument("--extended", action="store_true", help=f"allow N > {EXTENDED_N} and show progress")
    p.add_argument("--json", metavar="FILE", help="write the tables as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sequences", help="compare m(k) with addition-chain lengths")
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--max-n", type=int, default=9, help="enumeration depth used for m(k)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sequences)

    p = sub.add_parser("verify", help="run the seeded property suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--scale", type=_positive, default=1, help="multiply the sample sizes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("collapse", help="T0 quotient of a topology file")
    p.add_argument("file", help="topology text file, or '-' for stdin")
    p.set_defaults(func=cmd_collapse)
    return ap


def run(argv=None) -> int:
    """Parse ``argv`` and dispatch; returns the process exit code."""
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, PosetError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
