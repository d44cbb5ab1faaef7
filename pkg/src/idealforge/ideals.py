"""Exact order-ideal counts.

Three independent routes, all returning plain Python ints:

* ``count_ideals_bruteforce``: test every subset for downward closure.
* ``count_antichains``: test every subset for pairwise incomparability.
* ``count_ideals``: component factoring plus the elimination recursion
  ``j(P) = j(P - x) + j(P_x)``, fast on the posets built by ``construct``.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from ._accel import USE_NUMBA
from .poset import Poset, PosetError, bits

BRUTE_LIMIT = 24
KERNEL_BUDGET = 2_000_000
MEMO_LIMIT = 5_000_000


class CountLimitError(RuntimeError):
    """The counting memo outgrew its configured bound."""


def _check_brute(p: Poset) -> None:
    if p.n > BRUTE_LIMIT:
        raise PosetError(f"subset enumeration is limited to {BRUTE_LIMIT} elements, got {p.n}")


def count_ideals_bruteforce(p: Poset) -> int:
    _check_brute(p)
    if p.n == 0:
        return 1
    return int(kernels.count_closed_fast(p.rows(), p.n))


def count_antichains(p: Poset) -> int:
    _check_brute(p)
    if p.n == 0:
        return 1
    conflict = np.array(p.comparable, dtype=np.int64)
    return int(kernels.count_independent_fast(conflict, p.n))


def count_ideals(p: Poset, memo_limit: int = MEMO_LIMIT) -> int:
    """Number of order ideals of ``p`` (unbounded integer)."""
    if p.n == 0:
        return 1
    if USE_NUMBA and p.n <= kernels.WORD_LIMIT:
        got = int(kernels.elimination_count(p.rows(), p.n, KERNEL_BUDGET))
        if got >= 0:
            return got
    return _Eliminator(p, memo_limit).count(p.full)


class _Eliminator:
    """Memoised elimination over surviving-element bit sets (one per call)."""

    def __init__(self, p: Poset, memo_limit: int):
        self.above = p.above
        self.comp = p.comparable
        self.memo: dict[int, int] = {}
        self.limit = memo_limit

    def components(self, s: int) -> list[int]:
        comp = self.comp
        out = []
        while s:
            seed = s & -s
            part = seed
            frontier = seed
            while frontier:
                reach = 0
                for x in bits(frontier):
                    reach |= comp[x]
                reach &= s & ~part
                part |= reach
                frontier = reach
            out.append(part)
            s &= ~part
        return out

    def count(self, s: int) -> int:
        if s == 0:
            return 1
        hit = self.memo.get(s)
        if hit is not None:
            return hit
        comp = self.comp
        iso = 0
        for x in bits(s):
            if comp[x] & s == 0:
                iso |= 1 << x
        rest = s & ~iso
        if rest == 0:
            total = 1
        else:
            parts = self.components(rest)
            if len(parts) > 1:
                total = 1
                for part in parts:
                    total *= self.count(part)
            else:
                total = self.split(rest)
        total <<= iso.bit_count()
        if len(self.memo) >= self.limit:
            raise CountLimitError(f"elimination memo exceeded {self.limit} entries")
        self.memo[s] = total
        return total

    def split(self, s: int) -> int:
        above, comp = self.above, self.comp
        pivot, best = -1, None
        for x in bits(s):
            if above[x] & s == 0:
                size = (s & ~comp[x]).bit_count() - 1
                if best is None or size < best:
                    pivot, best = x, size
        bit = 1 << pivot
        return self.count(s & ~bit) + self.count(s & ~comp[pivot] & ~bit)


def count_ideals_python(p: Poset, memo_limit: int = MEMO_LIMIT) -> int:
    """The memoised pure-Python route, bypassing the compiled kernel."""
    if p.n == 0:
        return 1
    return _Eliminator(p, memo_limit).count(p.full)
