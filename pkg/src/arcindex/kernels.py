"""Hot loops of the enumeration: canonical forms, the row DFS and the M4 search.

Grids are handled as arrays of row bitmasks (column 0 is the most significant
of ``n`` bits), so the row-major norm order is the lexicographic order of the
mask arrays.  Every function here is numba-compiled unless
``ARCINDEX_DISABLE_NUMBA`` is set, in which case the same code runs in Python.
"""

import numpy as np

from ._accel import ENABLED, njit

__all__ = [
    "ENABLED",
    "MAXIMAL",
    "NOT_MAXIMAL",
    "INCONCLUSIVE",
    "DESTAB",
    "pair_tables",
    "dihedral_images",
    "canonical_masks",
    "is_canonical",
    "has_adjacency",
    "m4_search",
    "dfs",
]

MAXIMAL = 0
NOT_MAXIMAL = 1
INCONCLUSIVE = 2
DESTAB = 3


@njit
def rotl(m, b, n):
    """Rotate an ``n``-bit row left by ``b``: column j moves to column j-b."""
    if b == 0:
        return m
    full = (1 << n) - 1
    return ((m << b) | (m >> (n - b))) & full


@njit
def dihedral_images(masks, n, out):
    """Row masks of the 8 flips/transposes of the grid, written to ``out[8, n]``."""
    for t in range(8):
        for i in range(n):
            m = 0
            ii = n - 1 - i if t & 1 else i
            for j in range(n):
                jj = n - 1 - j if t & 2 else j
                if t & 4:
                    bit = (masks[jj] >> (n - 1 - ii)) & 1
                else:
                    bit = (masks[ii] >> (n - 1 - jj)) & 1
                m = (m << 1) | bit
            out[t, i] = m


@njit
def canonical_into(masks, n, imgs, best):
    """Largest orbit member under flips and cyclic shifts, written to ``best``."""
    dihedral_images(masks, n, imgs)
    have = False
    for t in range(8):
        for a in range(n):
            for b in range(n):
                better = not have
                if have:
                    for i in range(n):
                        v = rotl(imgs[t, (a + i) % n], b, n)
                        if v > best[i]:
                            better = True
                            break
                        if v < best[i]:
                            break
                if better:
                    for i in range(n):
                        best[i] = rotl(imgs[t, (a + i) % n], b, n)
                    have = True


@njit
def canonical_masks(masks, n):
    imgs = np.empty((8, n), np.int64)
    best = np.empty(n, np.int64)
    canonical_into(masks, n, imgs, best)
    return best


@njit
def is_canonical(masks, n, imgs):
    """True when no flip/shift image of ``masks`` is lexicographically larger.

    Only images sharing the first row are compared, so ``masks[0]`` must
    already be the largest first row of the orbit (the search guarantees it
    by fixing the top row to the smallest gap).
    """
    dihedral_images(masks, n, imgs)
    for t in range(8):
        for a in range(n):
            for b in range(n):
                if rotl(imgs[t, a], b, n) != masks[0]:
                    continue
                for i in range(1, n):
                    v = rotl(imgs[t, (a + i) % n], b, n)
                    if v > masks[i]:
                        return False
                    if v < masks[i]:
                        break
    return True


@njit
def _row_cols(m, n):
    c1 = -1
    c2 = -1
    for j in range(n):
        if (m >> (n - 1 - j)) & 1:
            if c1 < 0:
                c1 = j
            else:
                c2 = j
    return c1, c2


@njit
def _fill_pairs(masks, n, rc1, rc2, cr1, cr2):
    for j in range(n):
        cr1[j] = -1
        cr2[j] = -1
    for r in range(n):
        a, b = _row_cols(masks[r], n)
        rc1[r] = a
        rc2[r] = b
        for c in (a, b):
            if cr1[c] < 0:
                cr1[c] = r
            else:
                cr2[c] = r


@njit
def _cyc_adjacent(a, b, n):
    d = b - a
    if d < 0:
        d = -d
    return d == 1 or d == n - 1


@njit
def has_adjacency(masks, n):
    """Two 1's cyclically adjacent in some row or column."""
    rc1 = np.empty(n, np.int64)
    rc2 = np.empty(n, np.int64)
    cr1 = np.empty(n, np.int64)
    cr2 = np.empty(n, np.int64)
    _fill_pairs(masks, n, rc1, rc2, cr1, cr2)
    for i in range(n):
        if _cyc_adjacent(rc1[i], rc2[i], n) or _cyc_adjacent(cr1[i], cr2[i], n):
            return True
    return False


@njit
def _interleaved(a, b, c, d):
    if a == c or a == d or b == c or b == d:
        return True
    if a > b:
        a, b = b, a
    in1 = a < c and c < b
    in2 = a < d and d < b
    return in1 != in2


@njit
def _hash(row, n, mask):
    h = 0
    for i in range(n):
        h = ((h * 1000003) ^ row[i]) & mask
    return h


@njit
def _lex_cmp(x, y, n):
    for i in range(n):
        if x[i] > y[i]:
            return 1
        if x[i] < y[i]:
            return -1
    return 0


@njit
def m4_search(masks, n, budget, stop_on_destab):
    """Bounded breadth-first search over flip/shift orbits joined by M4 swaps.

    Returns ``(code, states)`` where code is MAXIMAL, NOT_MAXIMAL,
    INCONCLUSIVE (budget hit) or DESTAB (a cyclic adjacency was reached and
    ``stop_on_destab`` is set).
    """
    imgs = np.empty((8, n), np.int64)
    start = np.empty(n, np.int64)
    canonical_into(masks, n, imgs, start)
    if stop_on_destab and has_adjacency(masks, n):
        return DESTAB, 1
    if _lex_cmp(start, masks, n) > 0:
        return NOT_MAXIMAL, 1
    cap = 64
    while cap < 4 * budget + 16:
        cap *= 2
    hmask = cap - 1
    table = np.zeros((cap, n), np.int64)
    used = np.zeros(cap, np.bool_)
    queue = np.empty((budget + 1, n), np.int64)
    h = _hash(start, n, hmask)
    used[h] = True
    table[h, :] = start
    queue[0, :] = start
    tail = 1
    head = 0
    rc1 = np.empty(n, np.int64)
    rc2 = np.empty(n, np.int64)
    cr1 = np.empty(n, np.int64)
    cr2 = np.empty(n, np.int64)
    nb = np.empty(n, np.int64)
    canon = np.empty(n, np.int64)
    while head < tail:
        cur = queue[head]
        head += 1
        _fill_pairs(cur, n, rc1, rc2, cr1, cr2)
        for move in range(2 * n):
            i = move % n
            i2 = (i + 1) % n
            if move < n:
                if _interleaved(rc1[i], rc2[i], rc1[i2], rc2[i2]):
                    continue
                for r in range(n):
                    nb[r] = cur[r]
                nb[i] = cur[i2]
                nb[i2] = cur[i]
            else:
                if _interleaved(cr1[i], cr2[i], cr1[i2], cr2[i2]):
                    continue
                p1 = n - 1 - i
                p2 = n - 1 - i2
                for r in range(n):
                    m = cur[r]
                    b1 = (m >> p1) & 1
                    b2 = (m >> p2) & 1
                    if b1 != b2:
                        m ^= (1 << p1) | (1 << p2)
                    nb[r] = m
            if stop_on_destab and has_adjacency(nb, n):
                return DESTAB, tail
            canonical_into(nb, n, imgs, canon)
            if _lex_cmp(canon, start, n) > 0:
                return NOT_MAXIMAL, tail
            h = _hash(canon, n, hmask)
            found = False
            while used[h]:
                if _lex_cmp(table[h], canon, n) == 0:
                    found = True
                    break
                h = (h + 1) & hmask
            if found:
                continue
            if tail >= budget:
                return INCONCLUSIVE, tail
            used[h] = True
            table[h, :] = canon
            queue[tail, :] = canon
            tail += 1
    return MAXIMAL, tail


@njit
def pair_tables(n):
    """Column pairs (c1 < c2) in descending row-mask order."""
    npairs = n * (n - 1) // 2
    p1 = np.empty(npairs, np.int64)
    p2 = np.empty(npairs, np.int64)
    k = 0
    for c1 in range(n):
        for c2 in range(c1 + 1, n):
            p1[k] = c1
            p2[k] = c2
            k += 1
    return p1, p2


@njit
def dfs(n, prefix, stop_depth, out, cap):
    """Row-by-row search below a fixed prefix of pair indices.

    ``prefix[0]`` fixes the top row (0, g); g is then the smallest cyclic gap
    allowed in any row or column.  Rows are tried in descending mask order,
    so complete matrices come out in descending norm order.  Prunes: column
    counts <= 2, gaps >= g (which rules out cyclic adjacency), and no cycle
    closing before the last row (one component).

    If ``stop_depth < n`` the pair indices of every partial assignment of
    depth ``stop_depth`` are written to ``out``; otherwise the row masks of
    every complete matrix that is canonical under flips and shifts.
    Returns ``(records, complete_leaves)``; ``records == -1`` signals that
    ``cap`` rows of ``out`` were not enough.
    """
    p1, p2 = pair_tables(n)
    npairs = p1.shape[0]
    plen = prefix.shape[0]
    g = p2[prefix[0]] - p1[prefix[0]]
    if p1[prefix[0]] != 0 or g < 2 or g > n // 2:
        return 0, 0
    cnt = np.zeros(n, np.int64)
    firstrow = np.full(n, -1, np.int64)
    other = np.arange(n)
    masks = np.zeros(n, np.int64)
    choice = np.full(n, -1, np.int64)
    sav_a = np.zeros(n, np.int64)
    sav_b = np.zeros(n, np.int64)
    sav_oa = np.zeros(n, np.int64)
    sav_ob = np.zeros(n, np.int64)
    imgs = np.empty((8, n), np.int64)
    records = 0
    leaves = 0
    r = 0
    while r >= 0:
        if choice[r] >= 0:
            c1 = p1[choice[r]]
            c2 = p2[choice[r]]
            a = sav_a[r]
            b = sav_b[r]
            other[a] = sav_oa[r]
            other[b] = sav_ob[r]
            cnt[c1] -= 1
            cnt[c2] -= 1
            if cnt[c1] == 0:
                firstrow[c1] = -1
            if cnt[c2] == 0:
                firstrow[c2] = -1
        found = -1
        lo = choice[r] + 1
        hi = npairs
        if r < plen:
            if choice[r] >= 0:
                lo = npairs  # forced row already tried
            else:
                lo = prefix[r]
                hi = prefix[r] + 1
        for k in range(lo, hi):
            c1 = p1[k]
            c2 = p2[k]
            d = c2 - c1
            if d < g or n - d < g:
                continue
            if cnt[c1] >= 2 or cnt[c2] >= 2:
                continue
            if cnt[c1] == 1:
                d2 = r - firstrow[c1]
                if d2 < g or n - d2 < g:
                    continue
            if cnt[c2] == 1:
                d2 = r - firstrow[c2]
                if d2 < g or n - d2 < g:
                    continue
            if r < n - 1 and cnt[c1] == 1 and cnt[c2] == 1 and other[c1] == c2:
                continue
            found = k
            break
        if found < 0:
            choice[r] = -1
            r -= 1
            continue
        choice[r] = found
        c1 = p1[found]
        c2 = p2[found]
        a = other[c1]
        b = other[c2]
        sav_a[r] = a
        sav_b[r] = b
        sav_oa[r] = other[a]
        sav_ob[r] = other[b]
        other[a] = b
        other[b] = a
        if cnt[c1] == 0:
            firstrow[c1] = r
        if cnt[c2] == 0:
            firstrow[c2] = r
        cnt[c1] += 1
        cnt[c2] += 1
        masks[r] = (1 << (n - 1 - c1)) | (1 << (n - 1 - c2))
        if r + 1 == stop_depth and stop_depth < n:
            if records >= cap:
                return -1, leaves
            for i in range(stop_depth):
                out[records, i] = choice[i]
            records += 1
            continue
        if r == n - 1:
            leaves += 1
            if is_canonical(masks, n, imgs):
                if records >= cap:
                    return -1, leaves
                for i in range(n):
                    out[records, i] = masks[i]
                records += 1
            continue
        r += 1
        choice[r] = -1
    return records, leaves
