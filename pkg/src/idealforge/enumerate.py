"""Isomorph-free generation of posets and the m(k) / f(n) tables.

Every poset on n elements comes from one on n - 1 elements by adding a
maximal element above some down-set, so a level is the canonical-form
deduplicated set of one-element extensions of the previous level.

Achievable ideal counts of level n never need level n itself: adding ``y``
above the down-set D of P gives ``j(P) + #{ideals of P containing D}``.
"""

from __future__ import annotations

import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import kernels
from ._accel import threads
from .poset import Poset

log = logging.getLogger(__name__)

MAX_N = 10
DEFAULT_MAX_N = 8
_CHUNK = 4096
# levels with fewer rows than this run uncompiled: cheaper than a cold JIT
_SMALL_LEVEL = 1000


def _impl(rows: np.ndarray):
    return kernels.pure if len(rows) < _SMALL_LEVEL else kernels


def _extend_chunk(args) -> np.ndarray:
    parents, n, impl = args
    impl = kernels.pure if impl == "pure" else kernels
    js = impl.count_downsets_rows(parents, n)
    offsets = np.zeros(len(js) + 1, dtype=np.int64)
    np.cumsum(js, out=offsets[1:])
    out = np.zeros((int(offsets[-1]), n + 1), dtype=np.int64)
    impl.canonical_extensions(parents, n, offsets, out)
    return np.unique(out, axis=0)


def _map(func, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(func, jobs)
    else:
        yield from map(func, jobs)


def next_level(parents: np.ndarray, workers: int | None = None,
               progress: Callable[[int, int], None] | None = None) -> np.ndarray:
    """Canonical rows of all posets with one more element than ``parents``."""
    n = parents.shape[1]
    workers = threads() if workers is None else workers
    impl = "pure" if _impl(parents) is kernels.pure else "jit"
    jobs = [(parents[i:i + _CHUNK], n, impl) for i in range(0, len(parents), _CHUNK)]
    acc = np.zeros((0, n + 1), dtype=np.int64)
    pending = []
    for done, part in enumerate(_map(_extend_chunk, jobs, workers), 1):
        pending.append(part)
        if sum(len(x) for x in pending) > 4 * max(len(acc), 1 << 16):
            acc = np.unique(np.concatenate([acc, *pending]), axis=0)
            pending = []
        if progress:
            progress(done, len(jobs))
    return np.unique(np.concatenate([acc, *pending]), axis=0)


def levels(max_n: int, workers: int | None = None, progress=None) -> Iterator[np.ndarray]:
    """Yield the canonical row arrays of levels ``0..max_n``."""
    if max_n > MAX_N:
        raise ValueError(f"enumeration is limited to n <= {MAX_N}")
    level = np.zeros((1, 0), dtype=np.int64)
    yield level
    for n in range(1, max_n + 1):
        level = next_level(level, workers, progress)
        yield level


def enumerate_posets(n: int) -> Iterator[Poset]:
    """One canonical representative per isomorphism class on ``n`` elements."""
    if n < 0 or n > MAX_N:
        raise ValueError(f"enumeration is limited to 0 <= n <= {MAX_N}")
    for level in levels(n):
        pass
    for rows in level:
        yield Poset.from_rows(rows)


def class_counts(max_n: int) -> list[int]:
    return [len(level) for level in levels(max_n)]


@dataclass
class AchievabilityTable:
    """Ideal counts realised with exactly n elements, for ``n <= depth``."""

    depth: int
    realized: list[set[int]] = field(default_factory=list)

    def upto(self, n: int) -> set[int]:
        out: set[int] = set()
        for level in self.realized[: n + 1]:
            out |= level
        return out

    @property
    def m(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n, level in enumerate(self.realized):
            for k in level:
                if k >= 2 and k not in out:
                    out[k] = n
        return dict(sorted(out.items()))

    @property
    def f(self) -> dict[int, int]:
        out = {}
        for n in range(1, self.depth + 1):
            have = self.upto(n)
            k = 2
            while k in have:
                k += 1
            out[n] = k
        return out

    def to_json(self) -> dict:
        return {
            "m": {str(k): n for k, n in self.m.items()},
            "f": {str(n): k for n, k in self.f.items()},
            "certified_to": self.depth,
        }


def build_tables(max_n: int = DEFAULT_MAX_N, workers: int | None = None,
                 verbose: bool = False) -> AchievabilityTable:
    """Exhaustive m/f tables for posets with at most ``max_n`` elements.

    Only levels ``0..max_n - 1`` are materialised; the counts at level
    ``max_n`` come from the extension formula, so f(max_n) is certified too.
    """
    if not 0 <= max_n <= MAX_N:
        raise ValueError(f"tables are limited to 0 <= N <= {MAX_N}")
    table = AchievabilityTable(max_n, [{1}])
    if max_n == 0:
        return table
    progress = _meter(sys.stderr) if verbose else None
    for n, level in enumerate(levels(max_n - 1, workers, progress)):
        t0 = time.perf_counter()
        seen = np.zeros((1 << (n + 1)) + 1, dtype=np.uint8)
        small = _impl(level) is kernels.pure
        mark = kernels.pure.mark_extension_counts if small else kernels.mark_extensions
        for i in range(0, len(level), 1 << 14):
            mark(level[i:i + (1 << 14)], n, seen)
        table.realized.append({int(k) for k in np.flatnonzero(seen)})
        if verbose:
            print(f"level {n}: {len(level)} classes; sizes at {n + 1} in "
                  f"{time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return table


def _meter(stream):
    def show(done, total):
        stream.write(f"\r  extending {done}/{total} chunks")
        if done == total:
            stream.write("\n")
        stream.flush()
    return show


def m_of(k: int, table: AchievabilityTable) -> int | None:
    """Exact m(k) when certified by ``table``; ``None`` means "above depth"."""
    if k < 2:
        raise ValueError("m(k) is defined for k >= 2")
    return table.m.get(k)


def m_upper_bound(k: int) -> int:
    ell = k.bit_length() - 1
    return ell + 2 + max(0, math.ceil((ell - 2) / 3))


def f_lower_bounds(n: int) -> tuple[float, float, float]:
    """Exponential lower bounds on f(n) from the three constructions."""
    return 2 ** (n / 2), 2 ** (2 * (n - 1) / 3), 2 ** (3 * (n - 2) / 4)


def triples_threshold(n: int) -> int:
    """``floor(2^(3(n-2)/4)) + 1``, the first size the triples bound misses."""
    # exact integer floor of 2^(3(n-2)/4) for n >= 2; 2^(-3/4) floors to 0
    e = 3 * (n - 2)
    if e < 0:
        return 1
    return math.isqrt(math.isqrt(1 << e)) + 1


def dump_json(table: AchievabilityTable, path: str) -> None:
    text = json.dumps(table.to_json(), indent=2)
    if path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")
