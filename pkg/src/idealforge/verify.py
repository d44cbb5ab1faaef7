"""Seeded property checks behind ``idealforge verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import construct, gadgets
from .ideals import count_antichains, count_ideals, count_ideals_bruteforce
from .poset import (
    Poset,
    antichain,
    canonical_form,
    direct_sum,
    incomparable_part,
    ordinal_sum,
    point,
    random_poset,
    remove_element,
)
from .topology import (
    Preorder,
    blow_up,
    count_open_sets,
    preorder_from_topology,
    t0_collapse,
    topology_from_preorder,
    topology_of_poset,
)

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def random_preorder(rng: random.Random, n: int) -> Preorder:
    """Blow up a random poset so that some points become equivalent."""
    classes = rng.randint(1, n) if n else 0
    p = random_poset(rng, classes)
    sizes = [1] * classes
    for _ in range(n - classes):
        sizes[rng.randrange(classes)] += 1
    pre = blow_up(p, sizes)
    perm = list(range(n))
    rng.shuffle(perm)
    down = [0] * n
    for x in range(n):
        down[perm[x]] = sum(1 << perm[y] for y in range(n) if pre.down[x] >> y & 1)
    return Preorder(tuple(down))


def _posets(rng, count, max_n):
    for _ in range(count):
        yield random_poset(rng, rng.randint(0, max_n))


def check_counting(rng: random.Random, count: int, max_n: int = 12) -> list[str]:
    """Every counting law on ``count`` random posets; returns failures."""
    bad = []
    for p in _posets(rng, count, max_n):
        q = random_poset(rng, rng.randint(0, 5))
        jp, jq = count_ideals(p), count_ideals(q)
        if count_ideals_bruteforce(p) != jp:
            bad.append(f"brute != elimination on {p!r}")
        if count_antichains(p) != jp:
            bad.append(f"antichains != ideals on {p!r}")
        if count_ideals(direct_sum(p, q)) != jp * jq:
            bad.append(f"product law on {p!r}, {q!r}")
        if count_ideals(ordinal_sum(p, q)) != jp + jq - 1:
            bad.append(f"ordinal law on {p!r}, {q!r}")
        if count_ideals(direct_sum(p, point())) != 2 * jp:
            bad.append(f"doubling on {p!r}")
        if count_ideals(ordinal_sum(p, point())) != jp + 1:
            bad.append(f"increment on {p!r}")
        for x in range(p.n):
            if count_ideals(remove_element(p, x)) + count_ideals(incomparable_part(p, x)) != jp:
                bad.append(f"elimination at {x} on {p!r}")
    return bad


def check_topology(rng: random.Random, count: int, max_n: int = 10) -> list[str]:
    bad = []
    for _ in range(count):
        pre = random_preorder(rng, rng.randint(0, max_n))
        t = topology_from_preorder(pre)
        if preorder_from_topology(t) != pre:
            bad.append(f"preorder round trip {pre.down}")
        if topology_from_preorder(preorder_from_topology(t)) != t:
            bad.append(f"topology round trip {t.min_open}")
        t0, _ = t0_collapse(t)
        if not t0.is_t0() or count_open_sets(t0) != count_open_sets(t):
            bad.append(f"collapse changed the count for {t.min_open}")
        elif count_ideals(preorder_from_topology(t0).to_poset()) != count_open_sets(t):
            bad.append(f"open sets != ideals for {t.min_open}")
    for p in _posets(rng, count // 4, max_n):
        if count_open_sets(topology_of_poset(p)) != count_ideals(p):
            bad.append(f"poset topology count for {p!r}")
    return bad


def check_constructions(rng: random.Random, count: int, bits: int = 64) -> list[str]:
    bad = []
    ks = [rng.randrange(2, 1 << 20) for _ in range(count)]
    ks += [rng.randrange(2, 1 << bits) for _ in range(count)]
    for k in ks:
        L = construct.ell(k)
        bounds = {"singles": construct.singles_size(k), "doubles": construct.doubles_bound(k),
                  "triples": construct.triples_bound(k)}
        for name, bound in bounds.items():
            c = construct.BUILDERS[name](k)
            if count_ideals(c.poset) != k:
                bad.append(f"{name}({k}) has the wrong count")
            if c.size > bound:
                bad.append(f"{name}({k}) uses {c.size} > {bound}")
        if len(construct.construct_triples(k).poset.minimal()) != L:
            bad.append(f"triples({k}) minimal antichain is not of size {L}")
    return bad


def triple_type_hosts(rng: random.Random, count: int, max_bits: int = 24):
    """Random triples constructions that still carry a witness at the end."""
    system = gadgets.load_system()
    made = 0
    while made < count:
        k = rng.randrange(1 << 3, 1 << rng.randint(4, max_bits))
        c = construct.construct_triples(k, system)
        if c.witness_type is not None:
            made += 1
            yield c


def check_gadgets(rng: random.Random, hosts: int) -> list[str]:
    """Replay every table entry for the host's witness type on random hosts."""
    system = gadgets.load_system()
    bad = []
    for c in triple_type_hosts(rng, hosts):
        k = c.k
        base = count_ideals(c.poset)
        for (ti, r) in system.attach:
            if ti != c.witness_type:
                continue
            rows = list(c.poset.below)
            target, w = gadgets.apply_step(rows, c.designated, system, ti, r)
            p = Poset(rows, check=False)
            if count_ideals(p) != 8 * base + r:
                bad.append(f"type {ti} r={r} on host for k={k}")
            if not gadgets.check_witness(p, system, target, w):
                bad.append(f"type {ti} r={r} lost its witness on host for k={k}")
    return bad


def check_canonical(rng: random.Random, count: int, max_n: int = 8) -> list[str]:
    bad = []
    for p in _posets(rng, count, max_n):
        perm = list(range(p.n))
        rng.shuffle(perm)
        if canonical_form(p.relabel(perm)) != canonical_form(p):
            bad.append(f"canonical form moved under relabelling of {p!r}")
    if count_ideals(antichain(10)) != 1 << 10:
        bad.append("antichain count")
    return bad


def run_suite(seed: int = DEFAULT_SEED, scale: int = 1,
              report: Callable[[Check], None] | None = None) -> list[Check]:
    rng = random.Random(seed)
    plan = [
        ("counting laws", lambda: check_counting(rng, 300 * scale)),
        ("topology bijection", lambda: check_topology(rng, 100 * scale)),
        ("canonical form", lambda: check_canonical(rng, 200 * scale)),
        ("constructions", lambda: check_constructions(rng, 50 * scale)),
        ("gadget replay", lambda: check_gadgets(rng, 20 * scale)),
    ]
    out = []
    for name, fn in plan:
        failures = fn()
        c = Check(name, not failures, failures[0] if failures else "")
        out.append(c)
        if report:
            report(c)
    return out
