"""Addition-chain reference sequences a(k), b(k) and the comparison with m(k)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

A_LIMIT = 10_000


def is_addition_chain(terms) -> bool:
    if not terms or terms[0] != 1:
        return False
    seen = [terms[0]]
    for t in terms[1:]:
        if not any(t - u in seen for u in seen):
            return False
        seen.append(t)
    return True


@lru_cache(maxsize=8)
def _b_table(limit: int) -> np.ndarray:
    return kernels.binary_factor_table(limit)


def b_table(limit: int) -> np.ndarray:
    """``b`` for ``0..limit`` (entries 0 and 1 are placeholders)."""
    size = 1 << max(10, (limit - 1).bit_length())
    return _b_table(size)[: limit + 1]


def b_of(k: int) -> int:
    """Shortest chain length using only the factor and increment rules."""
    if k < 2:
        raise ValueError("b(k) is defined for k >= 2")
    return int(b_table(k)[k])


def b_choice(k: int, table: np.ndarray) -> tuple[str, int]:
    """Which branch attains b(k): ``("inc", k - 1)`` or ``("mul", d)``."""
    if k == 2:
        return "base", 2
    target = table[k]
    if table[k - 1] + 1 == target:
        return "inc", k - 1
    d = 2
    while d * d <= k:
        if k % d == 0 and table[d] + table[k // d] == target:
            return "mul", d
        d += 1
    raise AssertionError(f"no branch reaches b({k})")


def _lower_bound(k: int) -> int:
    ell = k.bit_length() - 1
    ones = bin(k).count("1")
    return ell + (ones >= 2) + (ones >= 3)


def shortest_chain(k: int) -> list[int]:
    """A shortest addition chain ending in ``k`` (iterative deepening)."""
    if k < 1:
        raise ValueError("addition chains end in a positive integer")
    if k > A_LIMIT:
        raise ValueError(f"a(k) search is budgeted to k <= {A_LIMIT}")
    if k == 1:
        return [1]
    upper = b_of(k) if k >= 2 else 0
    for length in range(_lower_bound(k), upper + 1):
        chain = np.zeros(length + 1, dtype=np.int64)
        if kernels._chain_search(k, length, chain):
            return [int(v) for v in chain]
    raise AssertionError(f"no chain for {k} within b({k}) = {upper} steps")


def a_of(k: int) -> int:
    if k < 2:
        raise ValueError("a(k) is defined for k >= 2")
    return len(shortest_chain(k)) - 1


@dataclass(frozen=True)
class Row:
    k: int
    m: int | None
    a: int
    b: int

    @property
    def flag(self) -> str:
        if self.m is None:
            return "m?"
        return "" if self.m == self.a else "m!=a"


def compare_report(limit: int, m_table: dict[int, int]) -> list[Row]:
    return [Row(k, m_table.get(k), a_of(k), b_of(k)) for k in range(2, limit + 1)]


def format_report(rows: list[Row]) -> str:
    lines = [f"{'k':>6} {'m':>3} {'a':>3} {'b':>3}"]
    for r in rows:
        m = "?" if r.m is None else str(r.m)
        lines.append(f"{r.k:>6} {m:>3} {r.a:>3} {r.b:>3}  {r.flag}".rstrip())
    return "\n".join(lines) + "\n"
