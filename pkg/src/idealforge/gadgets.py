"""Triple-type gadgets: small witness posets and their attachment table.

A host poset P "carries" a witness T when some up-set of P is isomorphic to
T. One triple step adds three isolated points x1, x2, x3 and a maximal
element y lying above everything except an up-set R of ``J = T + x1 + x2 + x3``;
then ``j(P') = 8 j(P) + j(R)``. For the step to repeat, ``J + y`` must again
contain an up-set isomorphic to a witness of the system.

``derive_gadget_system`` finds such a system by breadth-first search over
small connected witnesses reachable from the singles seed; the verified
result ships as ``data/gadgets.json``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels
from .ideals import count_ideals
from .poset import Poset, bits, canonical_bytes, canonical_labelling, mask_of

RESIDUES = (4, 5, 6, 7)
N_FRESH = 3
MAX_WITNESS = 7
MAX_TYPES = 3
DATA_FILE = "gadgets.json"

# singles seed for the prefix 111: a < b < d, c < d
SEED = Poset.from_relations(4, [(0, 1), (1, 3), (2, 3)])


class GadgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class Attachment:
    """How to place ``y`` for one (witness, residue) pair.

    ``down`` is a mask over the labelling of J (witness elements first, then
    the fresh points). ``target`` names the witness found in ``J + y`` and
    ``embed[i]`` the J+y index (``y`` is last) playing its element ``i``.
    """

    down: int
    target: int
    embed: tuple[int, ...]


@dataclass(frozen=True)
class GadgetSystem:
    types: tuple[Poset, ...]
    attach: dict[tuple[int, int], Attachment]
    seed_type: int
    seed_embed: tuple[int, ...]  # SEED element for each element of the seed type

    def to_json(self) -> dict:
        return {
            "types": [[list(bits(b)) for b in t.below] for t in self.types],
            "seed_type": self.seed_type,
            "seed_embed": list(self.seed_embed),
            "attach": [
                {"type": t, "r": r, "down": sorted(bits(a.down)), "target": a.target,
                 "embed": list(a.embed)}
                for (t, r), a in sorted(self.attach.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GadgetSystem":
        types = tuple(Poset([mask_of(row) for row in t]) for t in data["types"])
        attach = {
            (e["type"], e["r"]): Attachment(mask_of(e["down"]), e["target"], tuple(e["embed"]))
            for e in data["attach"]
        }
        return cls(types, attach, data["seed_type"], tuple(data["seed_embed"]))


# -- small-poset helpers ---------------------------------------------------------


def _key(p: Poset) -> bytes:
    _, canon = canonical_labelling(p)
    return canonical_bytes(canon.rows())


def up_sets(p: Poset) -> list[int]:
    """All up-sets of a small poset, as masks."""
    if p.n == 0:
        return [0]
    flags = kernels.closed_flags_fast(np.array(p.above, dtype=np.int64), p.n)
    return [int(s) for s in np.flatnonzero(flags)]


def is_connected(p: Poset) -> bool:
    if p.n == 0:
        return False
    reach = 1
    frontier = 1
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= p.comparable[x]
        frontier = nxt & ~reach
        reach |= nxt
    return reach == p.full


def with_fresh(t: Poset) -> Poset:
    return Poset(t.below + (0,) * N_FRESH, check=False)


def with_top(j: Poset, down: int) -> Poset:
    return Poset(j.below + (down,), check=False)


def embedding(host: Poset, upset: int, witness: Poset) -> tuple[int, ...] | None:
    """Host indices for the witness's elements when ``host|upset`` is
    isomorphic to the canonically labelled ``witness``."""
    sub = host.induced(upset)
    if sub.n != witness.n:
        return None
    perm, canon = canonical_labelling(sub)
    if canon.below != witness.below:
        return None
    members = list(bits(upset))
    return tuple(members[perm[p]] for p in range(witness.n))


def chain_upset(p: Poset, within: int | None = None) -> tuple[int, int] | None:
    """``(low, high)`` forming an up-set isomorphic to a 2-chain, if any."""
    pool = p.full if within is None else within
    for hi in bits(pool):
        if p.above[hi]:
            continue
        for lo in bits(p.below[hi] & pool):
            if p.above[lo] == 1 << hi:
                return lo, hi
    return None


# -- search ----------------------------------------------------------------------


def _admissible(t: Poset, jcount) -> bool:
    """``T + 3 points`` has up-sets of every residue size, and T has a 2-chain
    up-set for the two-bit tail."""
    vals = {jcount(t.induced(u)) for u in up_sets(t)}
    # r = 4 always comes from two fresh points; odd r needs an up-set of T itself
    return (5 in vals and 7 in vals and (3 in vals or 6 in vals)
            and chain_upset(t) is not None)


def derive_gadget_system(max_types: int = MAX_TYPES, max_witness: int = MAX_WITNESS) -> GadgetSystem:
    """Breadth-first search over witnesses reachable from the singles seed.

    Each expanded witness T records, per residue r, the witnesses found as
    connected up-sets of ``T + 3 points + y`` for every admissible placement
    of ``y``. The first family (in expansion order) of at most ``max_types``
    witnesses that contains the seed and is closed under all four residues
    is returned after verification.
    """
    jmemo: dict[bytes, int] = {}

    def jcount(p: Poset) -> int:
        k = _key(p)
        if k not in jmemo:
            jmemo[k] = count_ideals(p)
        return jmemo[k]

    found: dict[bytes, int] = {}
    witnesses: list[Poset] = []

    def intern(p: Poset) -> int:
        k = _key(p)
        if k not in found:
            found[k] = len(witnesses)
            witnesses.append(Poset.from_rows(canonical_labelling(p)[1].rows()))
        return found[k]

    intern(SEED)
    options: list[dict[int, list[tuple[int, int, int]]]] = []
    rejected: set[bytes] = set()
    i = 0
    while i < len(witnesses):
        t = witnesses[i]
        j = with_fresh(t)
        table: dict[int, list[tuple[int, int, int]]] = {r: [] for r in RESIDUES}
        for r_set in up_sets(j):
            r = jcount(j.induced(r_set))
            if r not in table:
                continue
            down = j.full & ~r_set
            w = with_top(j, down)
            for u in up_sets(w):
                if u == 0 or u.bit_count() > max_witness:
                    continue
                sub = w.induced(u)
                k = _key(sub)
                if k not in found:
                    if k in rejected or not is_connected(sub) or not _admissible(sub, jcount):
                        rejected.add(k)
                        continue
                    intern(sub)
                table[r].append((down, found[k], u))
        options.append(table)
        for size in range(1, max_types + 1):
            for rest in itertools.combinations(range(1, i), size - 2) if size >= 2 else [()]:
                members = {0, *rest, i} if i else {0}
                if len(members) != size:
                    continue
                if all(any(o[1] in members for o in options[m][r]) for m in members for r in RESIDUES):
                    return _assemble(sorted(members), witnesses, options)
        i += 1
    raise GadgetError(f"no closed system of at most {max_types} witnesses on <= {max_witness} elements")


def _assemble(combo, witnesses, options) -> GadgetSystem:
    index = {c: k for k, c in enumerate(combo)}
    types = tuple(witnesses[c] for c in combo)
    attach = {}
    for c in combo:
        w_of = with_fresh(witnesses[c])
        for r in RESIDUES:
            down, target, u = next(o for o in options[c][r] if o[1] in index)
            w = with_top(w_of, down)
            attach[(index[c], r)] = Attachment(down, index[target], embedding(w, u, witnesses[target]))
    # SEED was interned first, in canonical labelling; map it back onto SEED
    seed_embed = embedding(SEED, SEED.full, types[index[0]])
    system = GadgetSystem(types, attach, index[0], seed_embed)
    verify_system(system)
    return system


# -- verification ------------------------------------------------------------------


def apply_step(host: list[int], witness: tuple[int, ...], system: GadgetSystem,
               type_index: int, r: int) -> tuple[int, tuple[int, ...]]:
    """Append x1, x2, x3 and y to the row list ``host`` in place.

    Returns the new witness type and its host elements.
    """
    att = system.attach[(type_index, r)]
    t = system.types[type_index]
    base = len(host)
    host.extend([0] * N_FRESH)
    j_elems = list(witness) + [base + i for i in range(N_FRESH)]
    j_mask = mask_of(j_elems)
    down = ((1 << (base + N_FRESH)) - 1) & ~j_mask
    for i in bits(att.down):
        down |= 1 << j_elems[i]
    host.append(down)
    w_elems = j_elems + [base + N_FRESH]
    assert len(j_elems) == t.n + N_FRESH
    return att.target, tuple(w_elems[i] for i in att.embed)


def verify_system(system: GadgetSystem) -> None:
    """Raise ``GadgetError`` unless every table entry works on the bare witness."""
    for (ti, r), att in system.attach.items():
        t = system.types[ti]
        rows = list(t.below)
        target, embed = apply_step(rows, tuple(range(t.n)), system, ti, r)
        p = Poset(rows)
        if count_ideals(p) != 8 * count_ideals(t) + r:
            raise GadgetError(f"type {ti}, r={r}: wrong ideal count")
        if not check_witness(p, system, target, embed):
            raise GadgetError(f"type {ti}, r={r}: successor witness missing")
    if not check_witness(SEED, system, system.seed_type, system.seed_embed):
        raise GadgetError("seed witness does not embed in the 111 singles poset")
    for t in system.types:
        if chain_upset(t) is None:
            raise GadgetError("witness lacks a 2-chain up-set for the two-bit tail")


def check_witness(p: Poset, system: GadgetSystem, type_index: int,
                  elems: tuple[int, ...]) -> bool:
    """``elems`` is an up-set of ``p`` realising witness ``type_index``."""
    t = system.types[type_index]
    if len(set(elems)) != t.n:
        return False
    m = mask_of(elems)
    if not p.is_up_set(m):
        return False
    for i, e in enumerate(elems):
        want = mask_of(elems[k] for k in bits(t.below[i]))
        if p.below[e] & m != want:
            return False
    return True


# -- persistence -------------------------------------------------------------------


def save_system(system: GadgetSystem, path: Path) -> None:
    path.write_text(json.dumps(system.to_json(), indent=1) + "\n")


@lru_cache(maxsize=1)
def load_system() -> GadgetSystem:
    """The shipped table, re-verified on load."""
    text = resources.files("idealforge.data").joinpath(DATA_FILE).read_text()
    system = GadgetSystem.from_json(json.loads(text))
    verify_system(system)
    return system
