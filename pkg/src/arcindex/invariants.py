"""Exact knot polynomial invariants and the identification fingerprint.

Bracket and Jones polynomials come from a crossing-by-crossing contraction of
the Kauffman state sum; the Alexander polynomial from the Fox matrix of the
Wirtinger presentation, evaluated modulo word-size primes and reassembled by
interpolation and CRT; the signature from a Goeritz matrix.  The
fingerprint adds a count of PSL(2,7) representations of the knot group.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .diagram import PlanarKnotDiagram, simplify
from .laurent import LaurentPolynomial
from .representations import psl27_count

__all__ = [
    "BudgetExceeded",
    "Fingerprint",
    "kauffman_bracket",
    "bracket_state_sum",
    "jones",
    "alexander",
    "determinant",
    "goeritz_matrix",
    "signature",
    "cover_linking_form",
    "fingerprint",
]

L = LaurentPolynomial
DELTA = L({2: -1, -2: -1})  # loop value -A^2 - A^-2

# Largest number of simultaneous partial states the contraction may hold.
STATE_BUDGET = int(os.environ.get("ARCINDEX_BRACKET_BUDGET", "200000"))


class BudgetExceeded(RuntimeError):
    """Raised when an invariant computation would exceed its state budget."""


# -- Kauffman bracket -------------------------------------------------------

def _smoothings():
    # Slots are counter-clockwise from the incoming under strand; rotating the
    # over strand counter-clockwise sweeps corners (1,2) and (3,0), so the
    # A-smoothing joins slots 0-1 and 2-3.
    return (((0, 1), (2, 3)), 1), (((0, 3), (1, 2)), -1)


def _crossing_order(pd):
    """Greedy order that keeps the number of half-processed edges small."""
    remaining = set(range(len(pd)))
    seen: set[int] = set()
    order = []
    while remaining:
        best = max(remaining, key=lambda x: (sum(1 for e in pd[x] if e in seen), -x))
        order.append(best)
        remaining.discard(best)
        seen.update(pd[best])
    return order


def _poly_mul_monomial(p: dict, shift: int, loops: int) -> dict:
    out = {e + shift: c for e, c in p.items()}
    for _ in range(loops):
        nxt: dict[int, int] = {}
        for e, c in out.items():
            nxt[e + 2] = nxt.get(e + 2, 0) - c
            nxt[e - 2] = nxt.get(e - 2, 0) - c
        out = nxt
    return out


def _merge(p: dict, q: dict):
    for e, c in q.items():
        v = p.get(e, 0) + c
        if v:
            p[e] = v
        else:
            p.pop(e, None)


def _contract_crossing(matching: dict, labels, pairs, frontier: set):
    """Glue one smoothed crossing onto a partial state.

    ``matching`` pairs up frontier edge labels through the processed part.
    Returns (new matching as sorted tuple, closed loop count).
    """
    # nodes: ("s", i) for slots, ("l", e) for frontier labels touched here
    adj: dict = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for i, j in pairs:
        link(("s", i), ("s", j))
    terminals = []
    count = {}
    for e in labels:
        count[e] = count.get(e, 0) + 1
    seen_twice: dict[int, int] = {}
    for i, e in enumerate(labels):
        if count[e] == 2:
            if e in seen_twice:
                link(("s", seen_twice[e]), ("s", i))
            else:
                seen_twice[e] = i
        elif e in frontier:
            link(("s", i), ("l", e))
            f = matching[e]
            if f in labels:
                # both ends of the through-path meet this crossing
                if ("l", f) not in adj or ("l", e) not in adj[("l", f)]:
                    link(("l", e), ("l", f))
            else:
                link(("l", e), ("t", f))
                terminals.append(("t", f))
        else:
            terminals.append(("s", i))
    visited = set()
    new_pairs = []
    for t in terminals:
        if t in visited:
            continue
        cur = t
        visited.add(cur)
        while True:
            nxt = next((v for v in adj.get(cur, []) if v not in visited), None)
            if nxt is None:
                break
            cur = nxt
            visited.add(cur)
        a = t[1] if t[0] == "t" else labels[t[1]]
        b = cur[1] if cur[0] == "t" else labels[cur[1]]
        new_pairs.append((a, b))
    loops = 0
    for node in adj:
        if node in visited:
            continue
        loops += 1
        stack = [node]
        while stack:
            v = stack.pop()
            if v in visited:
                continue
            visited.add(v)
            stack.extend(adj[v])
    return new_pairs, loops


def kauffman_bracket(d: PlanarKnotDiagram) -> LaurentPolynomial:
    """Kauffman bracket in ``A`` (normalized so the unknot has bracket 1)."""
    c = d.crossings
    if c == 0:
        return L.one()
    pd = d.pd_code()
    order = _crossing_order(pd)
    frontier: set[int] = set()
    states: dict[tuple, dict] = {(): {0: 1}}
    for x in order:
        labels = pd[x]
        new_states: dict[tuple, dict] = {}
        for key, poly in states.items():
            matching = {}
            for a, b in key:
                matching[a] = b
                matching[b] = a
            for pairs, weight in _smoothings():
                new_pairs, loops = _contract_crossing(matching, labels, pairs, frontier)
                touched = {e for e in labels}
                touched.update(matching.get(e) for e in labels if e in frontier)
                kept = [(a, b) for a, b in key if a not in touched and b not in touched]
                full = tuple(sorted(tuple(sorted(p)) for p in kept + new_pairs))
                term = _poly_mul_monomial(poly, weight, loops)
                if full in new_states:
                    _merge(new_states[full], term)
                else:
                    new_states[full] = term
        states = new_states
        if len(states) > STATE_BUDGET:
            raise BudgetExceeded(f"bracket contraction exceeded {STATE_BUDGET} states")
        for e in labels:
            if e in frontier:
                frontier.discard(e)
            elif labels.count(e) == 1:
                frontier.add(e)
    (poly,) = states.values()
    total = L(poly)
    return _divide_by_delta(total)


def _divide_by_delta(p: LaurentPolynomial) -> LaurentPolynomial:
    # exact division by -A^2 - A^-2, i.e. by -(A^4 + 1) A^-2
    coeffs = p.coeffs()
    lo = p.min_exp
    # p = -(A^4+1) * q * A^-2  ->  q' = q*A^-2 solves p = -(A^4+1) q'
    q = [0] * max(len(coeffs) - 4, 0)
    rem = list(coeffs)
    for i in range(len(rem) - 1, 3, -1):
        qc = -rem[i]
        q[i - 4] = qc
        rem[i] += qc  # subtract -(qc) A^i
        rem[i - 4] += qc
    if any(rem):
        raise ArithmeticError("bracket sum not divisible by the loop value")
    return L.from_coeffs(q, lo + 2)


def bracket_state_sum(d: PlanarKnotDiagram, max_crossings: int = 24) -> LaurentPolynomial:
    """Reference implementation: explicit sum over all ``2^c`` states."""
    c = d.crossings
    if c == 0:
        return L.one()
    if c > max_crossings:
        raise BudgetExceeded(f"{c} crossings exceeds the state-sum limit {max_crossings}")
    pd = d.pd_code()
    nedges = 2 * c
    acc: dict[int, int] = {}
    for state in range(1 << c):
        parent = list(range(nedges))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        a_count = 0
        for x in range(c):
            labels = pd[x]
            if state >> x & 1:
                pairs = ((0, 3), (1, 2))
            else:
                pairs = ((0, 1), (2, 3))
                a_count += 1
            for i, j in pairs:
                ra, rb = find(labels[i]), find(labels[j])
                parent[ra] = rb
        loops = len({find(e) for e in range(nedges)})
        term = _poly_mul_monomial({0: 1}, a_count - (c - a_count), loops - 1)
        _merge(acc, term)
    return L(acc)


def jones(d: PlanarKnotDiagram) -> LaurentPolynomial:
    """Jones polynomial in ``t``; internally ``A = t^(-1/4)`` keeps exponents integral."""
    w = d.writhe()
    b = kauffman_bracket(d)
    v = b * L({-3 * w: (-1) ** (w % 2)})
    return v.divide_exponents(-4)


# -- Alexander polynomial ---------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@lru_cache(maxsize=None)
def _primes(count: int) -> tuple[int, ...]:
    out = []
    p = (1 << 31) - 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p -= 2
    return tuple(out)


def fox_matrix(d: PlanarKnotDiagram) -> tuple[np.ndarray, np.ndarray]:
    """Alexander matrix ``M0 + t*M1`` (square, one row per crossing)."""
    c = d.crossings
    m = len(d.visits)
    arc_of_visit = [0] * m
    arc = 0
    # the arc containing visit k; arcs change after each under visit
    first_under = next(k for k, (_, o) in enumerate(d.visits) if not o)
    for step in range(m):
        k = (first_under + 1 + step) % m
        arc_of_visit[k] = arc
        if not d.visits[k][1]:
            arc = (arc + 1) % c
    m0 = np.zeros((c, c), dtype=np.int64)
    m1 = np.zeros((c, c), dtype=np.int64)
    for x in range(c):
        u, o = d.visit_pair(x)
        k = arc_of_visit[o]
        i = arc_of_visit[u]  # incoming under arc ends at the under visit
        j = (i + 1) % c
        if d.signs[x] > 0:
            m0[x, k] += 1
            m1[x, k] -= 1
            m1[x, i] += 1
            m0[x, j] -= 1
        else:
            m1[x, k] += 1
            m0[x, k] -= 1
            m0[x, i] += 1
            m1[x, j] -= 1
    return m0, m1


def _modinv_vec(a: np.ndarray, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _batched_det_mod(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a batch of square matrices modulo ``p``."""
    a = mats % p
    k_count, m, _ = a.shape
    det = np.ones(k_count, dtype=np.int64)
    rows = np.arange(k_count)
    for k in range(m):
        col = a[:, k:, k] != 0
        has = col.any(axis=1)
        piv = np.argmax(col, axis=1) + k
        swap = has & (piv != k)
        if swap.any():
            r = rows[swap]
            top = a[r, k].copy()
            a[r, k] = a[r, piv[swap]]
            a[r, piv[swap]] = top
            det[swap] = (p - det[swap]) % p
        pv = a[:, k, k]
        det = det * pv % p
        inv = _modinv_vec(pv, p)
        if k + 1 < m:
            factors = a[:, k + 1 :, k] * inv[:, None] % p
            a[:, k + 1 :, k:] = (a[:, k + 1 :, k:] - factors[:, :, None] * a[:, k : k + 1, k:] % p) % p
    return det


def _interpolate_mod(xs: list[int], ys: list[int], p: int) -> list[int]:
    """Coefficients (low to high) of the polynomial through the points, mod p."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], p - 2, p) % p
    # Newton form to monomial form
    out = [0] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        nxt = [0] * n
        for d_ in range(n - 1):
            nxt[d_ + 1] = (nxt[d_ + 1] + out[d_]) % p
        for d_ in range(n):
            nxt[d_] = (nxt[d_] - xs[i] * out[d_]) % p
        nxt[0] = (nxt[0] + coef[i]) % p
        out = nxt
    return out


def _crt(residues: list[int], primes: tuple[int, ...]) -> int:
    x, mod = 0, 1
    for r, p in zip(residues, primes):
        t = (r - x) * pow(mod, -1, p) % p
        x += mod * t
        mod *= p
    return x - mod if x > mod // 2 else x


def _poly_det(m0: np.ndarray, m1: np.ndarray) -> list[int]:
    """Exact coefficients of det(M0 + t*M1) via evaluation and CRT."""
    m = m0.shape[0]
    if m == 0:
        return [1]
    row_bound = int((np.abs(m0) + np.abs(m1)).sum(axis=1).max())
    bound = max(row_bound, 1) ** m
    nprimes = 1
    while (1 << (31 * nprimes - 1)) <= 2 * bound:
        nprimes += 1
    primes = _primes(nprimes)
    xs = list(range(1, m + 2))
    per_prime = []
    for p in primes:
        pts = np.array(xs, dtype=np.int64)
        mats = (m0[None, :, :] + pts[:, None, None] * m1[None, :, :]) % p
        vals = _batched_det_mod(mats, p)
        per_prime.append(_interpolate_mod(xs, [int(v) for v in vals], p))
    return [_crt([cs[i] for cs in per_prime], primes) for i in range(m + 1)]


def _normalize_alexander(p: LaurentPolynomial) -> LaurentPolynomial:
    if p.is_zero():
        return p
    lo, hi = p.min_exp, p.max_exp
    if (lo + hi) % 2:
        raise ArithmeticError("Alexander polynomial of a knot must have even span")
    p = p.shift(-(lo + hi) // 2)
    return -p if p.leading < 0 else p


def alexander(d: PlanarKnotDiagram) -> LaurentPolynomial:
    """Alexander polynomial, symmetric in ``t <-> 1/t`` with positive leading coefficient."""
    if d.crossings == 0:
        return L.one()
    m0, m1 = fox_matrix(d)
    coeffs = _poly_det(m0[:-1, :-1], m1[:-1, :-1])
    return _normalize_alexander(L.from_coeffs(coeffs))


def determinant(d: PlanarKnotDiagram) -> int:
    return abs(int(alexander(d)(-1)))


# -- signature --------------------------------------------------------------

def _checkerboard(d: PlanarKnotDiagram):
    faces = d.faces()
    face_of = {}
    for i, f in enumerate(faces):
        for dart in f:
            face_of[dart] = i
    color = [-1] * len(faces)
    color[0] = 0
    stack = [0]
    while stack:
        i = stack.pop()
        for dart in faces[i]:
            j = face_of[dart ^ 1]
            if color[j] < 0:
                color[j] = 1 - color[i]
                stack.append(j)
            elif color[j] == color[i]:
                raise ArithmeticError("faces are not two-colourable")
    return faces, face_of, color


def goeritz_matrix(d: PlanarKnotDiagram, shaded: int = 1):
    """Goeritz matrix of the checkerboard surface formed by faces of colour ``shaded``.

    Returns ``(G, correction)``; the signature is ``inertia(G) - correction``.
    """
    faces, face_of, color = _checkerboard(d)
    white = [i for i in range(len(faces)) if color[i] != shaded]
    index = {f: k for k, f in enumerate(white)}
    size = len(white)
    g = [[0] * size for _ in range(size)]
    correction = 0
    for x in range(d.crossings):
        rot = d.rotation(x)
        corners = [face_of[rot[(i + 1) % 4]] for i in range(4)]
        # corner i lies between slots i and i+1; slots 1,3 bound the A-corners
        white_pair = (1, 3) if color[corners[1]] != shaded else (0, 2)
        eta = -1 if white_pair == (1, 3) else 1
        fa, fb = index[corners[white_pair[0]]], index[corners[white_pair[1]]]
        if fa != fb:
            g[fa][fb] -= eta
            g[fb][fa] -= eta
            g[fa][fa] += eta
            g[fb][fb] += eta
        # corners 0 and 2 are coherent for positive crossings, 1 and 3 for negative
        coherent = (0, 2) if d.signs[x] > 0 else (1, 3)
        if white_pair == coherent:
            correction += eta
    reduced = [row[1:] for row in g[1:]]
    return reduced, correction


def _inertia(mat) -> int:
    """Signature of a symmetric rational matrix by congruence diagonalization."""
    a = [[Fraction(v) for v in row] for row in mat]
    sig = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        pv = a[piv][piv]
        sig += 1 if pv > 0 else -1
        rest = [k for k in range(n) if k != piv]
        a = [[a[r][s] - a[r][piv] * a[piv][s] / pv for s in rest] for r in rest]
    return sig


def signature(d: PlanarKnotDiagram) -> int:
    """Knot signature (right-handed trefoil has signature -2)."""
    if d.crossings == 0:
        return 0
    g, correction = goeritz_matrix(d)
    return _inertia(g) - correction


def _inverse_and_det(mat):
    n = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return None, 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        pv = a[k][k]
        det *= pv
        a[k] = [v / pv for v in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [v - f * w for v, w in zip(a[r], a[k])]
    return [row[n:] for row in a], int(det)


def cover_linking_form(d: PlanarKnotDiagram) -> tuple[tuple[int, int], ...]:
    """Value counts of the linking form of the double branched cover.

    The group is presented by the Goeritz matrix ``G`` and the form by
    ``G^-1``.  Returns sorted ``(N * lambda(x, x) mod N, count)`` pairs over all
    elements ``x`` (``N`` the determinant), taking the smaller of the form and
    its negative so the result does not see mirror images.
    """
    if d.crossings == 0:
        return ((0, 1),)
    g, _ = goeritz_matrix(d)
    if not g:
        return ((0, 1),)
    inv, det = _inverse_and_det(g)
    if inv is None:
        raise ArithmeticError("Goeritz matrix of a knot must be nonsingular")
    n_ord = abs(det)
    m = len(g)
    gens = [tuple(int(inv[i][j] * n_ord) % n_ord for i in range(m)) for j in range(m)]
    zero = (0,) * m
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for y in frontier:
            for gen in gens:
                z = tuple((a + b) % n_ord for a, b in zip(y, gen))
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    counts: dict[int, int] = {}
    for y in seen:
        q = sum(y[i] * g[i][j] * y[j] for i in range(m) for j in range(m))
        v = (q // n_ord) % n_ord
        counts[v] = counts.get(v, 0) + 1
    pos = tuple(sorted(counts.items()))
    neg = tuple(sorted(((-v) % n_ord, c) for v, c in counts.items()))
    return min(pos, neg)


# -- fingerprint ------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    """Mirror-invariant identification key.

    ``jones_norm`` is the smaller (by term sequence) of J(t) and J(1/t);
    ``signature_abs`` (|signature|) and ``cover_form`` (double branched cover
    linking form, see :func:`cover_linking_form`) separate knots that share
    the polynomial triple, e.g. 8_8 and 10_129.  ``psl27`` counts
    homomorphisms to PSL(2,7) (see :mod:`arcindex.representations`) and
    separates 6_2 from 12n_25, which agree on everything else.
    """

    jones_norm: LaurentPolynomial
    alexander_norm: LaurentPolynomial
    det: int
    chiral_flag: bool
    signature_abs: int
    cover_form: tuple = ()
    psl27: int = 0

    def __lt__(self, other):
        return self.key() < other.key()

    def key(self):
        return (
            self.jones_norm.sort_key(),
            self.alexander_norm.sort_key(),
            self.det,
            self.chiral_flag,
            self.signature_abs,
            self.cover_form,
            self.psl27,
        )

    def serialize(self) -> str:
        return "|".join(
            [
                self.jones_norm.serialize(),
                self.alexander_norm.serialize(),
                str(self.det),
                "chiral" if self.chiral_flag else "achiral",
                str(self.signature_abs),
                " ".join(f"{v}:{c}" for v, c in self.cover_form),
                str(self.psl27),
            ]
        )

    @classmethod
    def parse(cls, text: str) -> "Fingerprint":
        j, a, det, chi, sig, form, psl = text.split("|")
        cover = tuple(tuple(int(v) for v in tok.split(":")) for tok in form.split())
        return cls(L.parse(j), L.parse(a), int(det), chi == "chiral", int(sig), cover, int(psl))

    def is_unknot(self) -> bool:
        return self.jones_norm == L.one() and self.alexander_norm == L.one() and self.det == 1


def fingerprint(d: PlanarKnotDiagram) -> Fingerprint:
    d = simplify(d)
    j = jones(d)
    ji = j.substitute_inverse()
    jn = min(j, ji, key=lambda p: p.sort_key())
    a = alexander(d)
    return Fingerprint(jn, a, abs(int(a(-1))), j != ji, abs(signature(d)), cover_linking_form(d),
                       psl27_count(d))
