"""Finite topologies, preorders and the T0 quotient.

A topology on points ``0..n-1`` is stored by its minimal open sets ``U_x``
(the open sets themselves are exactly the unions of these). The matching
preorder has ``x <= y`` iff ``U_x`` is contained in ``U_y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .poset import Poset, PosetError, bits, mask_of

OPEN_SET_LIMIT = 24


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Preorder:
    """``down[x]`` is the set of points ``y`` with ``y <= x`` (it contains x)."""

    down: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "down", tuple(int(m) for m in self.down))
        n = len(self.down)
        for x, d in enumerate(self.down):
            if not d >> x & 1:
                raise TopologyError(f"point {x} is not below itself")
            if d >> n:
                raise TopologyError(f"point {x} relates to a point outside 0..{n - 1}")
            for y in bits(d):
                if self.down[y] & ~d:
                    raise TopologyError(f"relation is not transitive at {y} <= {x}")

    @property
    def n(self) -> int:
        return len(self.down)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def is_partial_order(self) -> bool:
        return all(self.down[y] & (1 << x) == 0 for x in range(self.n)
                   for y in bits(self.down[x] & ~(1 << x)))

    @classmethod
    def from_poset(cls, p: Poset) -> "Preorder":
        return cls(tuple(b | 1 << x for x, b in enumerate(p.below)))

    def to_poset(self) -> Poset:
        if not self.is_partial_order():
            raise TopologyError("preorder has equivalent points; collapse it first")
        return Poset(tuple(d & ~(1 << x) for x, d in enumerate(self.down)))


@dataclass(frozen=True)
class FiniteTopology:
    min_open: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "min_open", tuple(int(m) for m in self.min_open))
        n = len(self.min_open)
        for x, u in enumerate(self.min_open):
            if not u >> x & 1:
                raise TopologyError(f"U_{x} does not contain {x}")
            if u >> n:
                raise TopologyError(f"U_{x} has points outside 0..{n - 1}")
            for y in bits(u):
                if self.min_open[y] & ~u:
                    raise TopologyError(f"U_{y} is not inside U_{x} although {y} is in U_{x}")

    @property
    def n(self) -> int:
        return len(self.min_open)

    def is_t0(self) -> bool:
        return len(set(self.min_open)) == self.n

    def is_open(self, mask: int) -> bool:
        return all(self.min_open[x] & ~mask == 0 for x in bits(mask))


def discrete(n: int) -> FiniteTopology:
    return FiniteTopology(tuple(1 << x for x in range(n)))


def indiscrete(n: int) -> FiniteTopology:
    return FiniteTopology(((1 << n) - 1,) * n)


def preorder_from_topology(t: FiniteTopology) -> Preorder:
    u = t.min_open
    down = []
    for y in range(t.n):
        down.append(mask_of(x for x in range(t.n) if u[x] & ~u[y] == 0))
    return Preorder(tuple(down))


def topology_from_preorder(p: Preorder) -> FiniteTopology:
    return FiniteTopology(p.down)


def topology_of_poset(p: Poset) -> FiniteTopology:
    return topology_from_preorder(Preorder.from_poset(p))


def t0_collapse(t: FiniteTopology) -> tuple[FiniteTopology, list[int]]:
    """Quotient by equal minimal open sets; returns the topology and the
    class index of every original point (classes in order of first point)."""
    cls_of: dict[int, int] = {}
    proj = []
    for u in t.min_open:
        proj.append(cls_of.setdefault(u, len(cls_of)))
    reps = list(cls_of)
    out = tuple(mask_of(proj[x] for x in bits(u)) for u in reps)
    return FiniteTopology(out), proj


def _closure_rows(t: FiniteTopology) -> np.ndarray:
    if t.n > OPEN_SET_LIMIT:
        raise TopologyError(f"open-set enumeration is limited to {OPEN_SET_LIMIT} points, got {t.n}")
    return np.array([u & ~(1 << x) for x, u in enumerate(t.min_open)], dtype=np.int64)


def count_open_sets(t: FiniteTopology) -> int:
    if t.n == 0:
        return 1
    return int(kernels.count_closed_fast(_closure_rows(t), t.n))


def enumerate_open_sets(t: FiniteTopology) -> tuple[int, list[int]]:
    """Every open set as a point mask, in increasing mask order."""
    if t.n == 0:
        return 1, [0]
    flags = kernels.closed_flags_fast(_closure_rows(t), t.n)
    sets = [int(s) for s in np.flatnonzero(flags)]
    return len(sets), sets


def pad_minimal(t: FiniteTopology, x: int, extra: int) -> FiniteTopology:
    """Insert ``extra`` new points into ``U_x`` for a preorder-minimal ``x``."""
    for y in bits(t.min_open[x]):
        if t.min_open[y] != t.min_open[x]:
            raise TopologyError(f"point {x} is not minimal")
    new = ((1 << extra) - 1) << t.n
    ux = t.min_open[x]
    rows = [u | new if u & ux == ux else u for u in t.min_open]
    rows += [ux | new] * extra
    return FiniteTopology(tuple(rows))


def blow_up(p: Poset, sizes: list[int]) -> Preorder:
    """Replace element ``x`` by ``sizes[x]`` mutually equivalent points."""
    if len(sizes) != p.n or any(s < 1 for s in sizes):
        raise TopologyError("need a positive size for every element")
    start = [0]
    for s in sizes:
        start.append(start[-1] + s)
    block = [((1 << sizes[x]) - 1) << start[x] for x in range(p.n)]
    down = []
    for x in range(p.n):
        d = block[x]
        for y in bits(p.below[x]):
            d |= block[y]
        down.extend([d] * sizes[x])
    return Preorder(tuple(down))


# -- text format -----------------------------------------------------------------


def format_topology(t: FiniteTopology) -> str:
    lines = [f"top {t.n}"]
    for x, u in enumerate(t.min_open):
        lines.append(f"{x} : " + " ".join(str(y) for y in bits(u)))
    return "\n".join(lines) + "\n"


def parse_topology(text: str) -> FiniteTopology:
    rows: dict[int, int] = {}
    n = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            head = line.split()
            if len(head) != 2 or head[0] != "top":
                raise TopologyError(f"expected 'top <n>', got {line!r}")
            n = int(head[1])
            continue
        left, sep, right = line.partition(":")
        if not sep:
            raise TopologyError(f"expected 'x : members', got {line!r}")
        x = int(left)
        if not 0 <= x < n or x in rows:
            raise TopologyError(f"bad or repeated point {x}")
        members = [int(v) for v in right.split()]
        if any(not 0 <= v < n for v in members):
            raise TopologyError(f"U_{x} names a point outside 0..{n - 1}")
        rows[x] = mask_of(members)
    if n is None:
        raise TopologyError("empty topology text")
    if len(rows) != n:
        raise TopologyError(f"expected {n} point lines, got {len(rows)}")
    try:
        return FiniteTopology(tuple(rows[x] for x in range(n)))
    except PosetError as exc:  # pragma: no cover - defensive
        raise TopologyError(str(exc)) from exc


def example_topology() -> FiniteTopology:
    """Eight points (0-based) where 6 and 7 share a minimal open set."""
    u = [{0}, {1}, {0, 1, 2}, {0, 1, 3}, {4}, {0, 1, 3, 4, 5},
         {0, 1, 3, 4, 5, 6, 7}, {0, 1, 3, 4, 5, 6, 7}]
    return FiniteTopology(tuple(mask_of(s) for s in u))


def example_t0_topology() -> FiniteTopology:
    u = [{0}, {1}, {0, 1, 2}, {0, 1, 3}, {4}, {0, 1, 3, 4, 5}, {0, 1, 3, 4, 5, 6}]
    return FiniteTopology(tuple(mask_of(s) for s in u))
