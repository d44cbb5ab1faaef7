"""Posets with exactly k order ideals on few elements.

All bit-walk builders read the binary expansion of k from the left and only
ever append elements, so the poset after any prefix is the subposet on the
first ``size`` elements recorded in the trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gadgets
from .poset import Poset, direct_sum, empty, mask_of, ordinal_sum, point
from .sequences import b_choice, b_table
from .topology import Preorder, blow_up

STRATEGIES = ("singles", "doubles", "triples", "factor", "pattern")
FACTOR_TABLE = 1 << 20
FACTOR_DEPTH = 64
FACTOR_NODES = 256
TRIAL_LIMIT = 1 << 20


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    consumed: int  # bits of k after the leading 1 read so far
    prefix: int  # value of those bits, i.e. the ideal count reached
    size: int  # elements in the poset at this point
    note: str = ""
    designated: tuple[int, ...] = ()  # chain or witness carried forward
    witness_type: int | None = None


@dataclass
class Construction:
    poset: Poset
    k: int
    strategy: str
    trace: list[Step] = field(default_factory=list)
    designated: tuple[int, ...] = ()
    witness_type: int | None = None

    @property
    def size(self) -> int:
        return self.poset.n

    def prefix_poset(self, step: Step) -> Poset:
        return Poset(self.poset.below[: step.size], check=False)


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ConstructionError(f"need a positive integer number of ideals, got {k!r}")


def ell(k: int) -> int:
    return int(k).bit_length() - 1


def bit_after_lead(k: int, i: int) -> int:
    """Bit ``i`` places to the right of the leading 1."""
    return (k >> (ell(k) - i)) & 1


def _trivial(k: int, strategy: str) -> Construction | None:
    if k == 1:
        return Construction(empty(), 1, strategy)
    return None


class _Rows:
    """Append-only row list: isolated points and tops over a down-set."""

    def __init__(self, rows=()):
        self.rows = list(rows)

    def __len__(self):
        return len(self.rows)

    @property
    def full(self) -> int:
        return (1 << len(self.rows)) - 1

    def point(self) -> int:
        self.rows.append(0)
        return len(self.rows) - 1

    def top(self, down: int | None = None) -> int:
        self.rows.append(self.full if down is None else down)
        return len(self.rows) - 1


# -- singles ----------------------------------------------------------------------


def _singles_rows(k: int, trace: list[Step]) -> _Rows:
    b = _Rows()
    L = ell(k)
    for i in range(1, L + 1):
        b.point()
        if bit_after_lead(k, i):
            b.top()
        trace.append(Step(i, k >> (L - i), len(b)))
    return b


def construct_singles(k: int) -> Construction:
    """One point per bit, plus a top over everything for each 1 bit."""
    _check_k(k)
    if c := _trivial(k, "singles"):
        return c
    trace: list[Step] = []
    b = _singles_rows(k, trace)
    return Construction(Poset(b.rows, check=False), k, "singles", trace)


# -- doubles ----------------------------------------------------------------------


def _double_step(b: _Rows, chain: tuple[int, int], r: int) -> tuple[int, int]:
    """Two points and a top: ``j -> 4j + r`` for ``r`` in {2, 3}."""
    x1 = b.point()
    x2 = b.point()
    if r == 2:
        b.top(b.full & ~(1 << x2))
        return x1, len(b) - 1
    b.top(b.full & ~mask_of(chain))
    return chain


def construct_doubles(k: int) -> Construction:
    _check_k(k)
    if c := _trivial(k, "doubles"):
        return c
    L = ell(k)
    trace: list[Step] = []
    b = _Rows()
    if k == 1 << L:
        for i in range(1, L + 1):
            b.point()
            trace.append(Step(i, k >> (L - i), len(b)))
        return Construction(Poset(b.rows, check=False), k, "doubles", trace)
    s = next(i for i in range(1, L + 1) if bit_after_lead(k, i))
    for _ in range(s):
        b.point()
    b.top()
    chain = (s - 1, s)
    trace.append(Step(s, k >> (L - s), len(b), "seed", chain))
    i = s
    while i < L:
        if not bit_after_lead(k, i + 1):
            b.point()
            i += 1
        elif i + 1 == L:
            b.point()
            b.top()
            chain = ()
            i += 1
        else:
            r = 2 + bit_after_lead(k, i + 2)
            chain = _double_step(b, chain, r)
            i += 2
        trace.append(Step(i, k >> (L - i), len(b), "", chain))
    return Construction(Poset(b.rows, check=False), k, "doubles", trace, chain)


# -- triples ----------------------------------------------------------------------


def third_one(k: int) -> int | None:
    """Offset (after the leading bit) of the third 1 bit from the left."""
    seen = 1
    for i in range(1, ell(k) + 1):
        if bit_after_lead(k, i):
            seen += 1
            if seen == 3:
                return i
    return None


def _chain_in_types(system: gadgets.GadgetSystem) -> tuple[tuple[int, int], ...]:
    return tuple(gadgets.chain_upset(t) for t in system.types)


def construct_triples(k: int, system: gadgets.GadgetSystem | None = None) -> Construction:
    """Three bits per gadget of four elements once three 1 bits have been read."""
    _check_k(k)
    if c := _trivial(k, "triples"):
        return c
    system = gadgets.load_system() if system is None else system
    s = third_one(k)
    if s is None:
        c = construct_singles(k)
        c.strategy = "triples"
        return c
    L = ell(k)
    trace: list[Step] = []
    b = _singles_rows(k >> (L - s), trace)
    # singles seed: points of the first block, its top, ..., last point, top
    second = next(i for i in range(1, s) if bit_after_lead(k, i))
    n = len(b)
    seed_map = (0, second, n - 2, n - 1)
    wtype = system.seed_type
    witness = tuple(seed_map[q] for q in system.seed_embed)
    trace[-1] = Step(s, trace[-1].prefix, n, "seed", witness, wtype)
    i = s
    while i < L:
        if not bit_after_lead(k, i + 1):
            b.point()
            i += 1
        elif L - i >= 3:
            r = 4 + 2 * bit_after_lead(k, i + 2) + bit_after_lead(k, i + 3)
            wtype, witness = gadgets.apply_step(b.rows, witness, system, wtype, r)
            i += 3
        elif L - i == 1:
            b.point()
            b.top()
            wtype, witness = None, ()
            i += 1
        else:
            lo, hi = _chain_in_types(system)[wtype]
            r = 2 + bit_after_lead(k, i + 2)
            _double_step(b, (witness[lo], witness[hi]), r)
            wtype, witness = None, ()
            i += 2
        trace.append(Step(i, k >> (L - i), len(b), "", witness, wtype))
    return Construction(Poset(b.rows, check=False), k, "triples", trace, witness, wtype)


# -- size formulas ------------------------------------------------------------------


def singles_size(k: int) -> int:
    return ell(k) + bin(k).count("1") - 1


def doubles_bound(k: int) -> float:
    return 1.5 * ell(k) + 1


def triples_bound(k: int) -> float:
    return 4 * ell(k) / 3 + 2


def triples_size_bound(k: int) -> int:
    """``l + 2 + ceil((l - s) / 3)`` for the third-one offset ``s``."""
    s = third_one(k)
    if s is None:
        return singles_size(k)
    L = ell(k)
    return L + 2 + -(-(L - s) // 3)


def triples_size(k: int) -> int:
    """Element count of ``construct_triples(k)`` without building it."""
    if k == 1:
        return 0
    s = third_one(k)
    if s is None:
        return singles_size(k)
    L = ell(k)
    size = s + 2
    i = s
    while i < L:
        if not bit_after_lead(k, i + 1):
            size, i = size + 1, i + 1
        elif L - i >= 3:
            size, i = size + 4, i + 3
        else:
            size, i = size + (L - i) + 1, L
    return size


# -- factor -------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _small_primes() -> np.ndarray:
    sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.uint64)


def small_prime_factors(k: int) -> list[int]:
    """Distinct primes below the trial-division limit dividing ``k``."""
    primes = _small_primes()
    if k < 1 << 64:
        hits = primes[np.uint64(k) % primes == 0]
        return [int(p) for p in hits if p < k]
    return [int(p) for p in primes[:6542] if k % int(p) == 0]


class _FactorPlanner:
    def __init__(self):
        self.memo: dict[int, tuple[int, tuple]] = {}
        self.nodes = 0

    def plan(self, k: int, depth: int = 0) -> tuple[int, tuple]:
        if k <= FACTOR_TABLE:
            return int(b_table(k)[k]) if k >= 2 else 0, ("table", k)
        if k in self.memo:
            return self.memo[k]
        best = (triples_size(k), ("triples", k))
        self.nodes += 1
        if self.nodes <= FACTOR_NODES:
            if depth < FACTOR_DEPTH:
                size, sub = self.plan(k - 1, depth + 1)
                if size + 1 < best[0]:
                    best = (size + 1, ("inc", sub))
            for p in small_prime_factors(k):
                sa, pa = self.plan(p, depth + 1)
                sb, pb = self.plan(k // p, depth + 1)
                if sa + sb < best[0]:
                    best = (sa + sb, ("mul", pa, pb))
        self.memo[k] = best
        return best


def _build_table_plan(k: int) -> Poset:
    if k == 1:
        return empty()
    table = b_table(k)
    # iterative on the increment spine, recursive on factors
    spine = []
    while True:
        kind, arg = b_choice(k, table)
        if kind == "base":
            p = point()
            break
        if kind == "mul":
            p = direct_sum(_build_table_plan(arg), _build_table_plan(k // arg))
            break
        spine.append(k)
        k = arg
    for _ in spine:
        p = ordinal_sum(p, point())
    return p


def _build_plan(plan: tuple) -> Poset:
    kind = plan[0]
    if kind == "table":
        return _build_table_plan(plan[1])
    if kind == "triples":
        return construct_triples(plan[1]).poset
    if kind == "inc":
        return ordinal_sum(_build_plan(plan[1]), point())
    return direct_sum(_build_plan(plan[1]), _build_plan(plan[2]))


def construct_factor(k: int) -> Construction:
    """Increment-or-factor recursion; exact b(k) below ``FACTOR_TABLE``."""
    _check_k(k)
    if c := _trivial(k, "factor"):
        return c
    _, plan = _FactorPlanner().plan(k)
    return Construction(_build_plan(plan), k, "factor", [], (), None)


# -- patterns -----------------------------------------------------------------------


def _walk_best(x: int) -> Construction:
    options = [construct_singles(x), construct_doubles(x), construct_triples(x)]
    return min(options, key=lambda c: c.size)


def find_repeat(k: int) -> tuple[int, int, int] | None:
    """Smallest-cost ``(a, b, x)`` with ``k = x (1 + 2^a + ... + 2^(ba))``
    and ``x < 2^a``."""
    best = None
    L = ell(k)
    for a in range(1, L + 1):
        for b in range(1, L // a + 1):
            g = ((1 << (a * (b + 1))) - 1) // ((1 << a) - 1)
            if g > k:
                break
            if k % g:
                continue
            x = k // g
            if x.bit_length() > a:
                continue
            cost = (a + 1) * b + (0 if x == 1 else _walk_best(x).size)
            if best is None or cost < best[0]:
                best = (cost, a, b, x)
    return None if best is None else best[1:]


def doubling_sections(k: int) -> int | None:
    """``r`` with ``k = 2^(2^r) - 1`` (r >= 1), else ``None``."""
    width = k.bit_length()
    if k + 1 != 1 << width or width & (width - 1) or width < 2:
        return None
    return width.bit_length() - 1


def construct_pattern(k: int) -> Construction | None:
    """Repeated-block or doubling-section build; ``None`` when k has neither."""
    _check_k(k)
    if c := _trivial(k, "pattern"):
        return c
    found = []
    r = doubling_sections(k)
    if r is not None:
        # sections 1|1|11|1111|...: each new 2^s-block adds 2^s points and a top
        p = Poset([0, 1], check=False)
        for s in range(1, r):
            block = ordinal_sum(Poset([0] * (1 << s), check=False), point())
            p = direct_sum(p, block)
        found.append(Construction(p, k, "pattern", [], (), None))
    rep = find_repeat(k)
    if rep is not None:
        a, b, x = rep
        geom = construct_singles(((1 << (a * (b + 1))) - 1) // ((1 << a) - 1)).poset
        p = geom if x == 1 else direct_sum(geom, _walk_best(x).poset)
        found.append(Construction(p, k, "pattern", [], (), None))
    if not found:
        return None
    return min(found, key=lambda c: c.size)


# -- minimal neighbourhoods ---------------------------------------------------------


def min_neighborhood_bound(k: int, m: int) -> int:
    L = ell(k)
    return m * L + 2 + max(0, -(-(L - 2) // 3))


def construct_min_neighborhood(k: int, m: int) -> Preorder:
    """k open sets with every minimal neighbourhood of at least ``m`` points.

    Each minimal element of the triples poset becomes ``m`` equivalent points.
    """
    _check_k(k)
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ConstructionError(f"need m >= 1, got {m!r}")
    p = construct_triples(k).poset
    return blow_up(p, [m if b == 0 else 1 for b in p.below])


# -- portfolio ----------------------------------------------------------------------


BUILDERS = {
    "singles": construct_singles,
    "doubles": construct_doubles,
    "triples": construct_triples,
    "factor": construct_factor,
    "pattern": construct_pattern,
}


def construct(k: int, strategy: str = "auto") -> Construction:
    if strategy == "auto":
        return construct_best(k)
    try:
        builder = BUILDERS[strategy]
    except KeyError:
        raise ConstructionError(f"unknown strategy {strategy!r}") from None
    c = builder(k)
    if c is None:
        raise ConstructionError(f"{k} has no repeated-pattern form")
    return c


def construct_best(k: int) -> Construction:
    """Fewest elements, then fewest relations, then strategy order."""
    _check_k(k)
    results = []
    for rank, name in enumerate(STRATEGIES):
        c = BUILDERS[name](k)
        if c is not None:
            results.append((c.size, c.poset.relation_count(), rank, c))
    return min(results, key=lambda t: t[:3])[3]
