"""Slow, obviously-correct reference computations.

Nothing here imports the package: posets are plain sets of ``(a, b)`` pairs
meaning ``a < b``, and everything is done by exhaustive search.
"""

from __future__ import annotations

import itertools


def rel_of(p) -> set[tuple[int, int]]:
    """Relation pairs of anything exposing ``n`` and ``below`` bit rows."""
    return {(a, b) for b in range(p.n) for a in range(p.n) if p.below[b] >> a & 1}


def transitive(n: int, rel: set[tuple[int, int]]) -> bool:
    return all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)


def ideals(n: int, rel) -> int:
    """Subsets closed downward under ``rel``."""
    rel = list(rel)
    total = 0
    for s in range(1 << n):
        if all(not (s >> b & 1) or (s >> a & 1) for a, b in rel):
            total += 1
    return total


def antichains(n: int, rel) -> int:
    comparable = {frozenset(p) for p in rel}
    total = 0
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            if all(frozenset(p) not in comparable for p in itertools.combinations(combo, 2)):
                total += 1
    return total


def open_sets(min_open: list[set[int]]) -> set[frozenset[int]]:
    """All unions of minimal open sets."""
    out = {frozenset()}
    for u in min_open:
        out |= {o | frozenset(u) for o in out}
    return out


def natural_posets(n: int):
    """Every poset on 0..n-1 whose order is compatible with the index order."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rel = {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
        if transitive(n, rel):
            yield rel


def iso_key(n: int, rel) -> tuple:
    return min(tuple(sorted((p[a], p[b]) for a, b in rel))
               for p in itertools.permutations(range(n)))


def class_count(n: int) -> int:
    return len({iso_key(n, rel) for rel in natural_posets(n)})


def realized_counts(n: int) -> set[int]:
    """Ideal counts of all posets on exactly ``n`` elements."""
    return {ideals(n, rel) for rel in natural_posets(n)}


def shortest_chain_length(k: int) -> int:
    """Breadth-first search over ascending addition chains (small k only)."""
    frontier = [(1,)]
    length = 0
    while True:
        if any(c[-1] == k for c in frontier):
            return length
        nxt = set()
        for c in frontier:
            for a in c:
                for b in c:
                    v = a + b
                    if c[-1] < v <= k:
                        nxt.add(c + (v,))
        frontier = list(nxt)
        length += 1


# Values produced by the functions above, frozen before the package existed.
EXAMPLE_OPEN_SETS = 18  # open_sets(example 8-point topology), also its T0 quotient
CLASS_COUNTS = [1, 1, 2, 5, 16, 63]  # class_count(0..5)
LABELLED_4 = 219  # labelled posets on 4 points
V_POSET_IDEALS = 5
