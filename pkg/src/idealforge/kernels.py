"""Hot inner loops over word-sized bit rows.

Every kernel takes ``int64`` arrays of bit masks (one row per element, so
``n <= 62``) and is compiled with numba when available. The functions are
written in the subset of Python numba accepts, so the uncompiled versions
are the reference fallback. Where numpy vectorises a kernel well a separate
``*_np`` twin is provided and picked when numba is off.
"""

import sys

import numpy as np

from ._accel import USE_NUMBA, jit, pure_twins

WORD_LIMIT = 62
_MOD = 2147483629  # prime < 2**31, keeps colour arithmetic inside int64


@jit
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@jit
def transpose(rows, n):
    out = np.zeros(n, dtype=np.int64)
    for x in range(n):
        r = rows[x]
        for y in range(n):
            if (r >> y) & 1:
                out[y] |= np.int64(1) << x
    return out


# ----------------------------------------------------------------------------
# subset sweeps


@jit
def count_closed(req, n):
    """Number of subsets S with ``req[x] <= S`` for every x in S."""
    total = 0
    top = np.int64(1) << n
    s = np.int64(0)
    while s < top:
        ok = True
        for x in range(n):
            if (s >> x) & 1 and (s & req[x]) != req[x]:
                ok = False
                break
        if ok:
            total += 1
        s += 1
    return total


@jit
def count_independent(conflict, n):
    """Number of subsets S with ``S & conflict[x] == 0`` for every x in S."""
    total = 0
    top = np.int64(1) << n
    s = np.int64(0)
    while s < top:
        ok = True
        for x in range(n):
            if (s >> x) & 1 and (s & conflict[x]) != 0:
                ok = False
                break
        if ok:
            total += 1
        s += 1
    return total


@jit
def closed_flags(req, n):
    top = np.int64(1) << n
    flags = np.zeros(top, dtype=np.uint8)
    s = np.int64(0)
    while s < top:
        ok = True
        for x in range(n):
            if (s >> x) & 1 and (s & req[x]) != req[x]:
                ok = False
                break
        if ok:
            flags[s] = 1
        s += 1
    return flags


_CHUNK = 1 << 20


def _closed_mask_np(req, n, lo, hi):
    s = np.arange(lo, hi, dtype=np.int64)
    ok = np.ones(s.shape, dtype=bool)
    for x in range(n):
        r = np.int64(req[x])
        has = ((s >> x) & 1).astype(bool)
        ok &= ~has | ((s & r) == r)
    return ok


def count_closed_np(req, n):
    total = 0
    top = 1 << n
    for lo in range(0, top, _CHUNK):
        total += int(_closed_mask_np(req, n, lo, min(top, lo + _CHUNK)).sum())
    return total


def count_independent_np(conflict, n):
    total = 0
    top = 1 << n
    for lo in range(0, top, _CHUNK):
        s = np.arange(lo, min(top, lo + _CHUNK), dtype=np.int64)
        ok = np.ones(s.shape, dtype=bool)
        for x in range(n):
            has = ((s >> x) & 1).astype(bool)
            ok &= ~has | ((s & np.int64(conflict[x])) == 0)
        total += int(ok.sum())
    return total


def closed_flags_np(req, n):
    top = 1 << n
    parts = [_closed_mask_np(req, n, lo, min(top, lo + _CHUNK)) for lo in range(0, top, _CHUNK)]
    return np.concatenate(parts).astype(np.uint8)


# ----------------------------------------------------------------------------
# one-element extensions


@jit
def _superset_counts(below, n, flags):
    top = 1 << n
    g = np.zeros(top, dtype=np.int64)
    for s in range(top):
        ok = True
        for x in range(n):
            if (s >> x) & 1 and (s & below[x]) != below[x]:
                ok = False
                break
        flags[s] = ok
        if ok:
            g[s] = 1
    for i in range(n):
        bit = 1 << i
        for s in range(top):
            if not (s & bit):
                g[s] += g[s | bit]
    return g


@jit
def mark_extension_counts(belows, n, seen):
    """Flag ``j(P + y)`` for every poset row of ``belows`` and every down-set
    that the new maximal element ``y`` may cover.

    Adding ``y`` over the down-set D gives ``j(P) + #{ideals containing D}``.
    """
    flags = np.zeros(1 << n, dtype=np.bool_)
    for i in range(belows.shape[0]):
        g = _superset_counts(belows[i], n, flags)
        j = g[0]
        for s in range(1 << n):
            if flags[s]:
                seen[j + g[s]] = 1


def mark_extension_counts_np(belows, n, seen):
    top = 1 << n
    idx = np.arange(top, dtype=np.int64)
    for row in belows:
        ok = np.ones(top, dtype=bool)
        for x in range(n):
            r = np.int64(row[x])
            ok &= ~((idx >> x) & 1).astype(bool) | ((idx & r) == r)
        g = ok.astype(np.int64)
        for i in range(n):
            v = g.reshape(-1, 2, 1 << i)
            v[:, 0, :] += v[:, 1, :]
        seen[g[0] + g[ok]] = 1


# ----------------------------------------------------------------------------
# canonical labelling


@jit
def _colours(below, above, n):
    col = np.empty(n, dtype=np.int64)
    for x in range(n):
        col[x] = popcount(below[x]) * 64 + popcount(above[x]) + 1
    classes = np.unique(col).shape[0]
    for _ in range(n):
        new = np.empty(n, dtype=np.int64)
        for x in range(n):
            down = 0
            up = 0
            for y in range(n):
                if (below[x] >> y) & 1:
                    down = (down + (col[y] * 40503 + 7919) % _MOD) % _MOD
                elif (above[x] >> y) & 1:
                    up = (up + (col[y] * 69069 + 104729) % _MOD) % _MOD
            new[x] = ((col[x] * 1000003 + down) % _MOD * 998244353 % _MOD + up) % _MOD
        grown = np.unique(new).shape[0]
        if grown <= classes:
            break
        col = new
        classes = grown
    return col


@jit
def canonical_labelling(below, n):
    """Return ``(perm, rows)``: ``perm[p]`` is the element placed at position
    ``p`` and ``rows`` the below-masks in canonical positions.

    Positions are assigned cell by cell (cells of an invariant colouring,
    smaller cells first); among all admissible orders the lexicographically
    least comparability code wins. Interchangeable twins are branched once.
    """
    above = transpose(below, n)
    perm_best = np.arange(n)
    rows = np.zeros(n, dtype=np.int64)
    if n == 0:
        return perm_best, rows
    col = _colours(below, above, n)

    # cells ordered by (size, colour)
    keys = np.empty(n, dtype=np.int64)
    for x in range(n):
        size = 0
        for y in range(n):
            if col[y] == col[x]:
                size += 1
        keys[x] = size
    order = np.argsort(col, kind="mergesort")
    order = order[np.argsort(keys[order], kind="mergesort")]
    pos_mask = np.zeros(n, dtype=np.int64)
    for p in range(n):
        c = col[order[p]]
        m = np.int64(0)
        for y in range(n):
            if col[y] == c:
                m |= np.int64(1) << y
        pos_mask[p] = m

    twin = np.empty(n, dtype=np.int64)
    for x in range(n):
        twin[x] = x
        for y in range(x):
            if below[y] == below[x] and above[y] == above[x]:
                twin[x] = twin[y]
                break

    perm = np.zeros(n, dtype=np.int64)
    cur = np.zeros((n, n), dtype=np.int64)
    best = np.zeros((n, n), dtype=np.int64)
    state = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n, dtype=np.int64)
    tried = np.zeros(n, dtype=np.int64)
    have_best = False
    used = np.int64(0)
    p = 0
    while p >= 0:
        cand = pos_mask[p] & ~used
        x = nxt[p]
        while x < n:
            if (cand >> x) & 1 and not (tried[p] >> twin[x]) & 1:
                break
            x += 1
        if x >= n:
            p -= 1
            if p >= 0:
                used &= ~(np.int64(1) << perm[p])
            continue
        nxt[p] = x + 1
        tried[p] |= np.int64(1) << twin[x]
        perm[p] = x
        if p > 0:
            s = state[p - 1]
        elif have_best:
            s = 0
        else:
            s = -1
        for q in range(p):
            y = perm[q]
            v = 0
            if (below[x] >> y) & 1:
                v = 1
            elif (below[y] >> x) & 1:
                v = 2
            cur[p, q] = v
            if s == 0:
                if v < best[p, q]:
                    s = -1
                elif v > best[p, q]:
                    s = 1
                    break
        if s == 1:
            continue
        state[p] = s
        if p == n - 1:
            if s == -1 or not have_best:
                best[:, :] = cur
                perm_best[:] = perm
                have_best = True
                state[:] = 0
            continue
        used |= np.int64(1) << x
        p += 1
        nxt[p] = 0
        tried[p] = 0

    pos = np.empty(n, dtype=np.int64)
    for p in range(n):
        pos[perm_best[p]] = p
    for p in range(n):
        r = below[perm_best[p]]
        m = np.int64(0)
        for y in range(n):
            if (r >> y) & 1:
                m |= np.int64(1) << pos[y]
        rows[p] = m
    return perm_best, rows


@jit
def count_downsets_rows(belows, n):
    m = belows.shape[0]
    out = np.zeros(m, dtype=np.int64)
    for i in range(m):
        out[i] = count_closed(belows[i], n)
    return out


@jit
def canonical_extensions(parents, n, offsets, out):
    """Write the canonical rows of every one-element extension of each parent.

    ``parents`` holds posets on ``n`` elements; ``offsets`` are the running
    totals of their ideal counts; ``out`` has ``offsets[-1]`` rows of width
    ``n + 1``.
    """
    child = np.zeros(n + 1, dtype=np.int64)
    for i in range(parents.shape[0]):
        k = offsets[i]
        for s in range(1 << n):
            ok = True
            for x in range(n):
                if (s >> x) & 1 and (s & parents[i, x]) != parents[i, x]:
                    ok = False
                    break
            if not ok:
                continue
            for x in range(n):
                child[x] = parents[i, x]
            child[n] = s
            _, rows = canonical_labelling(child, n + 1)
            out[k, :] = rows
            k += 1


# ----------------------------------------------------------------------------
# elimination counting


@jit
def elimination_count(below, n, budget):
    """``j(P)`` by repeated ``j(S) = j(S - x) + j(S_x)`` on a maximal pivot.

    Returns -1 once more than ``budget`` nodes have been expanded.
    """
    above = transpose(below, n)
    comp = np.empty(n, dtype=np.int64)
    for x in range(n):
        comp[x] = below[x] | above[x]
    cap = 2 * n + 4
    st = np.zeros(cap, dtype=np.int64)
    mu = np.zeros(cap, dtype=np.int64)
    full = (np.int64(1) << n) - 1 if n < 63 else np.int64(-1)
    st[0] = full
    mu[0] = 1
    top = 1
    total = np.int64(0)
    nodes = 0
    while top > 0:
        top -= 1
        s = st[top]
        mult = mu[top]
        nodes += 1
        if nodes > budget:
            return -1
        rest = s
        while rest:
            low = rest & -rest
            x = popcount(low - 1)
            rest ^= low
            if comp[x] & s == 0:
                s ^= low
                mult <<= 1
        if s == 0:
            total += mult
            continue
        pivot = -1
        best = n + 1
        rest = s
        while rest:
            low = rest & -rest
            x = popcount(low - 1)
            rest ^= low
            if above[x] & s == 0:
                size = popcount(s & ~comp[x] & ~low)
                if size < best:
                    best = size
                    pivot = x
        bit = np.int64(1) << pivot
        st[top] = s & ~bit
        mu[top] = mult
        top += 1
        st[top] = s & ~comp[pivot] & ~bit
        mu[top] = mult
        top += 1
    return total


# ----------------------------------------------------------------------------
# addition chains


@jit
def binary_factor_table(limit):
    """``b[k]`` for ``2 <= k <= limit`` from
    ``b(k) = min(1 + b(k - 1), b(d) + b(k / d))`` with ``b(2) = 1``."""
    big = np.int64(1) << 40
    b = np.full(limit + 1, big, dtype=np.int64)
    b[0] = 0
    b[1] = 0
    for k in range(2, limit + 1):
        if k == 2:
            b[k] = 1
        elif b[k - 1] + 1 < b[k]:
            b[k] = b[k - 1] + 1
        e = 2
        while e <= k and e * k <= limit:
            v = b[e] + b[k]
            if v < b[e * k]:
                b[e * k] = v
            e += 1
    return b


@jit
def _chain_search(k, length, chain):
    """Depth-first search for an ascending addition chain of ``length`` steps."""
    L = length
    cand = np.zeros((L + 1, (L + 1) * (L + 2) // 2), dtype=np.int64)
    ncand = np.zeros(L + 1, dtype=np.int64)
    ptr = np.zeros(L + 1, dtype=np.int64)
    chain[0] = 1
    if k == 1:
        return True
    d = 0
    fill = True
    while d >= 0:
        if fill:
            # distinct sums above chain[d], largest first
            c = 0
            for i in range(d + 1):
                for j in range(i, d + 1):
                    v = chain[i] + chain[j]
                    if v > chain[d] and v <= k:
                        dup = False
                        for t in range(c):
                            if cand[d, t] == v:
                                dup = True
                                break
                        if not dup:
                            cand[d, c] = v
                            c += 1
            cand[d, :c] = -np.sort(-cand[d, :c])
            ncand[d] = c
            ptr[d] = 0
            fill = False
        if ptr[d] >= ncand[d]:
            d -= 1
            continue
        v = cand[d, ptr[d]]
        ptr[d] += 1
        left = L - (d + 1)
        if left < 40 and v * (np.int64(1) << left) < k:
            # candidates are descending, none of the rest can reach k
            ptr[d] = ncand[d]
            continue
        chain[d + 1] = v
        if d + 1 == L:
            if v == k:
                return True
            continue
        d += 1
        fill = True
    return False


if USE_NUMBA:
    count_closed_fast = count_closed
    count_independent_fast = count_independent
    closed_flags_fast = closed_flags
    mark_extensions = mark_extension_counts
else:
    count_closed_fast = count_closed_np
    count_independent_fast = count_independent_np
    closed_flags_fast = closed_flags_np
    mark_extensions = mark_extension_counts_np

# uncompiled twins for small inputs; identical to the module when numba is off
pure = pure_twins(globals()) if USE_NUMBA else sys.modules[__name__]
