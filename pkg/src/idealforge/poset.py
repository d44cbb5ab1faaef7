"""Finite partial orders stored as per-element down-set bit rows.

Elements are ``0..n-1``. ``below[x]`` is an int bit set of the elements
strictly less than ``x``. Python ints give the wide tier for free; the
``rows()`` view packs posets of at most 62 elements into an ``int64`` array
for the compiled kernels.
"""

from __future__ import annotations

import random
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels


class PosetError(ValueError):
    """Malformed order relation or illegal operation on a poset."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


class Poset:
    def __init__(self, below: Sequence[int], check: bool = True):
        self.below = tuple(int(b) for b in below)
        self.n = len(self.below)
        if check:
            self.validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_relations(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Transitive closure of the strict relations ``a < b``."""
        below = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise PosetError(f"relation {a} < {b} outside 0..{n - 1}")
            below[b] |= 1 << a
        below = _close(below)
        for x in range(n):
            if below[x] >> x & 1:
                raise PosetError(f"relations contain a cycle through {x}")
        return cls(below, check=False)

    @classmethod
    def from_rows(cls, rows) -> "Poset":
        return cls([int(r) for r in rows], check=False)

    # -- derived data ---------------------------------------------------------

    @cached_property
    def above(self) -> tuple[int, ...]:
        up = [0] * self.n
        for x, b in enumerate(self.below):
            bit = 1 << x
            for y in bits(b):
                up[y] |= bit
        return tuple(up)

    @cached_property
    def comparable(self) -> tuple[int, ...]:
        return tuple(b | a for b, a in zip(self.below, self.above))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def covers(self) -> tuple[int, ...]:
        """``covers[y]``: elements covered by ``y`` (the Hasse edges into y)."""
        out = []
        for b in self.below:
            inner = 0
            for z in bits(b):
                inner |= self.below[z]
            out.append(b & ~inner)
        return tuple(out)

    @cached_property
    def heights(self) -> tuple[int, ...]:
        h = [0] * self.n
        for x in self.linear_extension():
            h[x] = max((h[y] + 1 for y in bits(self.below[x])), default=0)
        return tuple(h)

    def linear_extension(self) -> list[int]:
        return sorted(range(self.n), key=lambda x: (self.below[x].bit_count(), x))

    def relation_count(self) -> int:
        return sum(b.bit_count() for b in self.below)

    def maximal(self) -> list[int]:
        return [x for x in range(self.n) if not self.above[x]]

    def minimal(self) -> list[int]:
        return [x for x in range(self.n) if not self.below[x]]

    def leq(self, x: int, y: int) -> bool:
        return x == y or bool(self.below[y] >> x & 1)

    def rows(self) -> np.ndarray:
        if self.n > kernels.WORD_LIMIT:
            raise PosetError(f"{self.n} elements do not fit one machine word per row")
        return np.array(self.below, dtype=np.int64)

    # -- checks ---------------------------------------------------------------

    def validate(self) -> None:
        full = self.full
        for x, b in enumerate(self.below):
            if b & ~full or b < 0:
                raise PosetError(f"row {x} mentions elements outside 0..{self.n - 1}")
            if b >> x & 1:
                raise PosetError(f"{x} < {x}: relation is not irreflexive")
            for y in bits(b):
                if self.below[y] & ~b:
                    raise PosetError(f"relation not transitive at {y} < {x}")
        for x in range(self.n):
            if self.below[x] & self.above[x]:
                raise PosetError(f"relation not antisymmetric at {x}")

    def is_down_set(self, mask: int) -> bool:
        return all(self.below[x] & ~mask == 0 for x in bits(mask))

    def is_up_set(self, mask: int) -> bool:
        return all(self.above[x] & ~mask == 0 for x in bits(mask))

    def down_closure(self, mask: int) -> int:
        out = mask
        for x in bits(mask):
            out |= self.below[x]
        return out

    def up_closure(self, mask: int) -> int:
        out = mask
        for x in bits(mask):
            out |= self.above[x]
        return out

    # -- subposets ------------------------------------------------------------

    def induced(self, mask: int) -> "Poset":
        """Subposet on the elements of ``mask``, relabelled in index order."""
        keep = list(bits(mask))
        pos = {x: i for i, x in enumerate(keep)}
        rows = []
        for x in keep:
            rows.append(mask_of(pos[y] for y in bits(self.below[x] & mask)))
        return Poset(rows, check=False)

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Poset in which element ``perm[x]`` plays the role of ``x``."""
        rows = [0] * self.n
        for x, b in enumerate(self.below):
            rows[perm[x]] = mask_of(perm[y] for y in bits(b))
        return Poset(rows, check=False)

    # -- dunder ---------------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.below == other.below

    def __hash__(self) -> int:
        return hash(self.below)

    def __repr__(self) -> str:
        pairs = [(x, y) for y in range(self.n) for x in bits(self.covers[y])]
        return f"Poset(n={self.n}, covers={pairs})"


def _close(below: list[int]) -> list[int]:
    n = len(below)
    changed = True
    while changed:
        changed = False
        for x in range(n):
            b = below[x]
            extra = 0
            for y in bits(b):
                extra |= below[y]
            if extra & ~b:
                below[x] = b | extra
                changed = True
    return below


# -- operations ---------------------------------------------------------------


def empty() -> Poset:
    return Poset((), check=False)


def point() -> Poset:
    return Poset((0,), check=False)


def chain(n: int) -> Poset:
    return Poset([(1 << x) - 1 for x in range(n)], check=False)


def antichain(n: int) -> Poset:
    return Poset([0] * n, check=False)


def add_maximal(p: Poset, down: int) -> Poset:
    """Add one element lying exactly above the down-set ``down``."""
    if down & ~p.full or not p.is_down_set(down):
        raise PosetError("attachment set is not a down-set of the poset")
    return Poset(p.below + (down,), check=False)


def direct_sum(p: Poset, q: Poset) -> Poset:
    shift = p.n
    return Poset(p.below + tuple(b << shift for b in q.below), check=False)


def ordinal_sum(p: Poset, q: Poset) -> Poset:
    shift = p.n
    base = p.full
    return Poset(p.below + tuple((b << shift) | base for b in q.below), check=False)


def _check_element(p: Poset, x: int) -> None:
    if not 0 <= x < p.n:
        raise PosetError(f"element {x} outside 0..{p.n - 1}")


def remove_element(p: Poset, x: int) -> Poset:
    _check_element(p, x)
    return p.induced(p.full & ~(1 << x))


def incomparable_part(p: Poset, x: int) -> Poset:
    """``P_x``: the elements incomparable to ``x``."""
    _check_element(p, x)
    return p.induced(p.full & ~p.comparable[x] & ~(1 << x))


def canonical_labelling(p: Poset) -> tuple[list[int], Poset]:
    """Canonical order of the elements and the poset relabelled by it."""
    perm, rows = kernels.canonical_labelling(p.rows(), p.n)
    return [int(v) for v in perm], Poset.from_rows(rows)


def canonical_form(p: Poset) -> bytes:
    """Bytes that coincide exactly for isomorphic posets."""
    _, canon = canonical_labelling(p)
    return canonical_bytes(canon.rows())


def canonical_bytes(rows: np.ndarray) -> bytes:
    return bytes([len(rows)]) + np.asarray(rows, dtype="<i8").tobytes()


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return p.n == q.n and canonical_form(p) == canonical_form(q)


def random_poset(rng: random.Random, n: int, density: float | None = None) -> Poset:
    """Random labelled poset: closure of a random DAG on a shuffled order."""
    if density is None:
        density = rng.choice((0.1, 0.2, 0.3, 0.5))
    order = list(range(n))
    rng.shuffle(order)
    below = [0] * n
    for i in range(n):
        for j in range(i):
            if rng.random() < density:
                below[order[i]] |= 1 << order[j]
    return Poset(_close(below), check=False)


# -- text formats -------------------------------------------------------------


def format_poset(p: Poset, footer: Sequence[str] = ()) -> str:
    lines = [f"poset {p.n}"]
    for y in range(p.n):
        for x in bits(p.covers[y]):
            lines.append(f"{x} < {y}")
    lines.extend(f"# {f}" for f in footer)
    return "\n".join(lines) + "\n"


def parse_poset(text: str) -> Poset:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            head = line.split()
            if len(head) != 2 or head[0] != "poset" or not head[1].isdigit():
                raise PosetError(f"line {lineno}: expected 'poset <n>'")
            n = int(head[1])
            continue
        parts = line.split("<")
        if len(parts) != 2:
            raise PosetError(f"line {lineno}: expected 'a < b'")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise PosetError(f"line {lineno}: element labels must be integers") from None
    if n is None:
        raise PosetError("missing 'poset <n>' header")
    return Poset.from_relations(n, pairs)


def to_dot(p: Poset, name: str = "P", labels: Sequence[str] | None = None) -> str:
    """Hasse diagram; one rank per height so minimal elements sit at the bottom."""
    out = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(p.n):
        label = labels[x] if labels else str(x)
        out.append(f'  {x} [label="{label}"];')
    levels: dict[int, list[int]] = {}
    for x, h in enumerate(p.heights):
        levels.setdefault(h, []).append(x)
    for h in sorted(levels):
        members = "; ".join(str(x) for x in levels[h])
        out.append(f"  {{ rank=same; {members}; }}")
    for y in range(p.n):
        for x in bits(p.covers[y]):
            out.append(f"  {x} -> {y};")
    out.append("}")
    return "\n".join(out) + "\n"
