"""Compiled kernels against the numpy / pure-Python fallback path.

    python benchmarks/bench_kernels.py            # in-process kernel pairs
    python benchmarks/bench_kernels.py --e2e      # also time whole CLI runs per flag

The fallback twins are always importable, so the kernel pairs run in one
process. ``--e2e`` re-runs CLI commands with ``IDEALFORGE_NUMBA=1`` and ``=0``.
"""

import argparse
import os
import random
import subprocess
import sys
import time

import numpy as np

from idealforge import kernels
from idealforge._accel import USE_NUMBA
from idealforge.construct import construct_triples
from idealforge.enumerate import levels
from idealforge.ideals import count_ideals, count_ideals_python
from idealforge.poset import random_poset


def best_of(fn, *args, repeat=3):
    fn(*args)  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def row(name, fast, slow):
    print(f"{name:<34} {fast * 1e3:>10.2f} ms {slow * 1e3:>10.2f} ms {slow / fast:>8.1f}x")


def bench_closed(n=22):
    rng = random.Random(1)
    p = random_poset(rng, n, 0.15)
    req = p.rows()
    assert kernels.count_closed(req, n) == kernels.count_closed_np(req, n)
    row(f"down-set count, n={n}", best_of(kernels.count_closed, req, n),
        best_of(kernels.count_closed_np, req, n))


def bench_extensions(n=7):
    for level in levels(n):
        pass
    seen_a = np.zeros((1 << (n + 1)) + 1, dtype=np.uint8)
    seen_b = seen_a.copy()

    def fast():
        kernels.mark_extension_counts(level, n, seen_a)

    def slow():
        kernels.mark_extension_counts_np(level, n, seen_b)

    t_fast, t_slow = best_of(fast), best_of(slow, repeat=1)
    assert (seen_a == seen_b).all()
    row(f"extension sizes, level {n} ({len(level)})", t_fast, t_slow)


def bench_elimination(count=200):
    rng = random.Random(2)
    posets = [construct_triples(rng.randrange(2, 1 << 40)).poset for _ in range(count)]

    def fast():
        for p in posets:
            count_ideals(p)

    def slow():
        for p in posets:
            count_ideals_python(p)

    row(f"elimination, {count} triples posets", best_of(fast), best_of(slow, repeat=1))


def bench_cli(argv):
    out = []
    for flag in ("1", "0"):
        env = dict(os.environ, IDEALFORGE_NUMBA=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-m", "idealforge", *argv], env=env, check=True,
                       stdout=subprocess.DEVNULL)
        out.append(time.perf_counter() - t0)
    row("cli " + " ".join(argv), *out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--e2e", action="store_true")
    args = ap.parse_args()
    if not USE_NUMBA:
        sys.exit("numba is disabled or missing; nothing to compare in-process")
    print(f"{'kernel':<34} {'numba':>13} {'fallback':>13} {'speedup':>9}")
    bench_closed()
    bench_extensions()
    bench_elimination()
    if args.e2e:
        bench_cli(["search", "--max-n", "7"])
        bench_cli(["construct", "123456789", "--strategy", "triples"])


if __name__ == "__main__":
    main()
