"""Counting homomorphisms of a knot group into PSL(2,7).

Meridians of a knot are all conjugate, so a homomorphism sends every
Wirtinger generator into one conjugacy class.  The number of homomorphisms
sending meridians to elements of order 7 is a knot invariant that ignores
mirror images and orientation (the set of order-7 elements is closed under
inversion).  It separates knots that agree on the polynomial invariants and
the double-cover data, e.g. 6_2 and the 12-crossing knot 12n_25.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._accel import njit
from .diagram import PlanarKnotDiagram

__all__ = ["psl27", "wirtinger_relations", "propagation_plan", "psl27_count"]

FORWARD, BACKWARD, CHECK = 0, 1, 2


@lru_cache(maxsize=1)
def psl27():
    """Multiplication table, inverses and the order-7 class representatives of PSL(2,7).

    Elements are the Moebius maps of the projective line over F_7, stored as
    permutations of ``0..7`` (7 is the point at infinity).
    """
    inf = 7

    def mob(f):
        return tuple(f(z) for z in range(8))

    def inv7(z):
        return pow(z, 5, 7)

    t = mob(lambda z: inf if z == inf else (z + 1) % 7)
    s = mob(lambda z: 0 if z == inf else (inf if z == 0 else (-inv7(z)) % 7))
    ident = tuple(range(8))
    elems = [ident]
    index = {ident: 0}
    k = 0
    while k < len(elems):
        for gen in (t, s):
            p = tuple(gen[i] for i in elems[k])
            if p not in index:
                index[p] = len(elems)
                elems.append(p)
        k += 1
    m = len(elems)
    mul = np.empty((m, m), np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[tuple(a[x] for x in b)]  # a after b
    inv = np.empty(m, np.int64)
    for i in range(m):
        inv[i] = int(np.nonzero(mul[i] == 0)[0][0])

    def order(i):
        r, x = 1, i
        while x != 0:
            x = mul[i, x]
            r += 1
        return r

    sevens = [i for i in range(m) if order(i) == 7]
    reps: list[int] = []
    covered: set[int] = set()
    for x in sevens:
        if x in covered:
            continue
        reps.append(x)
        covered |= {int(mul[mul[g, x], inv[g]]) for g in range(m)}
    sizes = [sum(1 for y in sevens if y in {int(mul[mul[g, r], inv[g]]) for g in range(m)}) for r in reps]
    return mul, inv, np.array(reps, np.int64), np.array(sizes, np.int64)


def wirtinger_relations(d: PlanarKnotDiagram) -> np.ndarray:
    """Rows ``(in_arc, out_arc, over_arc, sign)``, one per crossing, in under-pass order.

    Arc ``j`` ends at the ``j``-th under-pass; the relation reads
    ``x_out = g x_in g^-1`` with ``g = x_over`` for positive crossings and
    ``x_over^-1`` for negative ones.
    """
    c = d.crossings
    arc_at = []
    unders = []
    count = 0
    for k, (_, over) in enumerate(d.visits):
        arc_at.append(count % c)
        if not over:
            unders.append(k)
            count += 1
    rels = np.empty((c, 4), np.int64)
    for j, k in enumerate(unders):
        x = d.visits[k][0]
        rels[j] = (j, (j + 1) % c, arc_at[d.visit_pair(x)[1]], d.signs[x])
    return rels


def propagation_plan(rels: np.ndarray, c: int):
    """Seed arcs and, per seed, the relation steps its value unlocks.

    A step derives an arc forwards (from the incoming arc), backwards (from
    the outgoing arc) or checks a relation whose arcs are all known.  Seeds are
    chosen as over-arcs needed next, which keeps their number near the bridge
    number of the diagram.
    """
    known = [False] * c
    done = [False] * len(rels)
    seeds, starts, kinds, which = [], [], [], []

    def close():
        changed = True
        while changed:
            changed = False
            for r, (i, o, v, _) in enumerate(rels):
                if done[r] or not known[v]:
                    continue
                if known[i] and known[o]:
                    kinds.append(CHECK)
                elif known[i]:
                    kinds.append(FORWARD)
                    known[o] = True
                elif known[o]:
                    kinds.append(BACKWARD)
                    known[i] = True
                else:
                    continue
                which.append(r)
                done[r] = True
                changed = True

    while not all(known):
        nxt = None
        for i, o, v, _ in rels:
            if (known[i] or known[o]) and not known[v]:
                nxt = int(v)
                break
        if nxt is None:
            nxt = known.index(False)
        seeds.append(nxt)
        starts.append(len(kinds))
        known[nxt] = True
        close()
    starts.append(len(kinds))
    return (np.array(seeds, np.int64), np.array(starts, np.int64),
            np.array(kinds, np.int64), np.array(which, np.int64))


@njit
def _count_fixed(rels, c, seeds, starts, kinds, which, mul, inv, cls, first):
    """Assignments with ``seeds[0] -> first`` and later seeds in ``cls`` satisfying every relation."""
    ns = seeds.shape[0]
    img = np.full(c, -1, np.int64)
    choice = np.zeros(ns, np.int64)
    total = 0
    level = 0
    choice[0] = -1
    while level >= 0:
        choice[level] += 1
        limit = 1 if level == 0 else cls.shape[0]
        if choice[level] >= limit:
            level -= 1
            continue
        img[seeds[level]] = first if level == 0 else cls[choice[level]]
        ok = True
        for t in range(starts[level], starts[level + 1]):
            r = which[t]
            i = rels[r, 0]
            o = rels[r, 1]
            g = img[rels[r, 2]]
            if rels[r, 3] < 0:
                g = inv[g]
            if kinds[t] == 0:
                img[o] = mul[mul[g, img[i]], inv[g]]
            elif kinds[t] == 1:
                img[i] = mul[mul[inv[g], img[o]], g]
            elif img[o] != mul[mul[g, img[i]], inv[g]]:
                ok = False
                break
        if not ok:
            continue
        if level == ns - 1:
            total += 1
        else:
            level += 1
            choice[level] = -1
    return total


def psl27_count(d: PlanarKnotDiagram) -> int:
    """Number of homomorphisms from the knot group to PSL(2,7) with meridians of order 7."""
    mul, inv, reps, sizes = psl27()
    if d.crossings == 0:
        return int(sizes.sum())
    c = d.crossings
    rels = wirtinger_relations(d)
    seeds, starts, kinds, which = propagation_plan(rels, c)
    total = 0
    for rep, size in zip(reps, sizes):
        # conjugating by the group permutes homomorphisms, so fix the first seed
        members = np.array(sorted({int(mul[mul[g, rep], inv[g]]) for g in range(len(inv))}), np.int64)
        total += int(size) * int(_count_fixed(rels, c, seeds, starts, kinds, which, mul, inv, members, int(rep)))
    return total
