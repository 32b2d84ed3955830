"""Planar knot diagrams as signed, oriented Gauss codes.

A diagram with ``c`` crossings is a cyclic sequence of ``2c`` visits.  Visit
``k`` passes crossing ``crossing_of[k]`` either over or under; edge ``k`` runs
from visit ``k`` to visit ``k+1`` (indices mod ``2c``).  Each crossing has a
sign, and the sign together with the over/under data fixes the cyclic order of
the four strand ends at the crossing, i.e. a rotation system.

Darts: ``2k`` is the start of edge ``k`` (outgoing at visit ``k``) and
``2k+1`` its end (incoming at visit ``k+1``); ``d ^ 1`` is the opposite dart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "PlanarKnotDiagram",
    "DiagramError",
    "dt_code",
    "canonical_dt",
    "from_dt",
    "parse_dt",
    "format_dt",
    "is_prime_diagram",
    "is_reduced",
    "is_alternating",
    "mirror",
    "simplify",
]


class DiagramError(ValueError):
    """Raised for malformed or non-realizable diagrams."""


@dataclass(frozen=True)
class PlanarKnotDiagram:
    """Oriented knot diagram.

    ``visits`` is a tuple of ``(crossing, is_over)`` pairs in traversal order,
    ``signs[x]`` is the sign (+1/-1) of crossing ``x``.  Crossing ids are
    relabelled in order of first appearance, so equal codes give equal values.
    """

    visits: tuple[tuple[int, bool], ...]
    signs: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        visits = tuple((int(x), bool(o)) for x, o in self.visits)
        relabel: dict[int, int] = {}
        for x, _ in visits:
            if x not in relabel:
                relabel[x] = len(relabel)
        signs_in = tuple(self.signs)
        if relabel and set(relabel) != set(range(len(signs_in))):
            raise DiagramError("crossing ids must be 0..c-1 matching the signs")
        signs = [0] * len(relabel)
        for old, new in relabel.items():
            signs[new] = int(signs_in[old])
        visits = tuple((relabel[x], o) for x, o in visits)
        object.__setattr__(self, "visits", visits)
        object.__setattr__(self, "signs", tuple(signs))
        self._validate()

    # -- basic structure -------------------------------------------------
    @property
    def crossings(self) -> int:
        return len(self.signs)

    def _validate(self):
        c = self.crossings
        if len(self.visits) != 2 * c:
            raise DiagramError("each crossing must be visited exactly twice")
        seen: dict[int, list[bool]] = {}
        for x, o in self.visits:
            seen.setdefault(x, []).append(o)
        for x, flags in seen.items():
            if len(flags) != 2 or flags[0] == flags[1]:
                raise DiagramError(f"crossing {x} must be passed once over and once under")
        if any(s not in (1, -1) for s in self.signs):
            raise DiagramError("signs must be +1 or -1")
        if c and len(self.faces()) != c + 2:
            raise DiagramError("Gauss code is not realizable as a planar diagram")

    def visit_pair(self, x: int) -> tuple[int, int]:
        """Return (under_visit, over_visit) indices of crossing ``x``."""
        return self._pairs()[x]

    def _pairs(self):
        if "pairs" not in self._cache:
            pairs = [[-1, -1] for _ in range(self.crossings)]
            for k, (x, o) in enumerate(self.visits):
                pairs[x][1 if o else 0] = k
            self._cache["pairs"] = [tuple(p) for p in pairs]
        return self._cache["pairs"]

    def in_dart(self, k: int) -> int:
        m = len(self.visits)
        return 2 * ((k - 1) % m) + 1

    @staticmethod
    def out_dart(k: int) -> int:
        return 2 * k

    def rotation(self, x: int) -> tuple[int, int, int, int]:
        """Counter-clockwise darts at crossing ``x``, starting with the incoming under dart."""
        u, o = self.visit_pair(x)
        ui, uo = self.in_dart(u), self.out_dart(u)
        oi, oo = self.in_dart(o), self.out_dart(o)
        if self.signs[x] > 0:
            return (ui, oo, uo, oi)
        return (ui, oi, uo, oo)

    def dart_vertex(self, d: int) -> int:
        m = len(self.visits)
        k = d >> 1 if d % 2 == 0 else ((d >> 1) + 1) % m
        return self.visits[k][0]

    def _succ(self):
        if "succ" not in self._cache:
            succ = [0] * (2 * len(self.visits))
            for x in range(self.crossings):
                rot = self.rotation(x)
                for i in range(4):
                    succ[rot[i]] = rot[(i + 1) % 4]
            self._cache["succ"] = succ
        return self._cache["succ"]

    def faces(self) -> list[list[int]]:
        """Faces as dart cycles of ``d -> succ(d ^ 1)``."""
        if "faces" not in self._cache:
            succ = self._succ()
            n = len(succ)
            seen = [False] * n
            faces = []
            for d0 in range(n):
                if seen[d0]:
                    continue
                face = []
                d = d0
                while not seen[d]:
                    seen[d] = True
                    face.append(d)
                    d = succ[d ^ 1]
                faces.append(face)
            self._cache["faces"] = faces
        return self._cache["faces"]

    def pd_code(self) -> list[tuple[int, int, int, int]]:
        """Per crossing, edge labels counter-clockwise from the incoming under edge."""
        return [tuple(d >> 1 for d in self.rotation(x)) for x in range(self.crossings)]

    def writhe(self) -> int:
        return sum(self.signs)

    def gauss_text(self) -> str:
        """Debug dump, e.g. ``O1+ U2- ...`` (1-based crossing ids)."""
        if not self.visits:
            return "-"
        return " ".join(
            f"{'O' if o else 'U'}{x + 1}{'+' if self.signs[x] > 0 else '-'}" for x, o in self.visits
        )

    @classmethod
    def from_gauss_text(cls, text: str) -> "PlanarKnotDiagram":
        """Inverse of :meth:`gauss_text`; ``-`` or an empty string is the unknot."""
        toks = text.split()
        if toks in ([], ["-"]):
            return cls.unknot()
        triples = []
        for tok in toks:
            m = re.fullmatch(r"([OU])(\d+)([+-])", tok)
            if m is None:
                raise DiagramError(f"bad Gauss token {tok!r}")
            triples.append((int(m.group(2)) - 1, m.group(1) == "O", 1 if m.group(3) == "+" else -1))
        return cls.from_visits(triples)

    @classmethod
    def unknot(cls) -> "PlanarKnotDiagram":
        return cls((), ())

    @classmethod
    def from_visits(cls, visits: Iterable[tuple[int, bool, int]]) -> "PlanarKnotDiagram":
        """Build from ``(crossing, is_over, sign)`` triples."""
        triples = list(visits)
        signs: dict[int, int] = {}
        for x, _, s in triples:
            if signs.setdefault(x, s) != s:
                raise DiagramError(f"inconsistent sign for crossing {x}")
        ids = sorted(signs)
        remap = {x: i for i, x in enumerate(ids)}
        return cls(tuple((remap[x], o) for x, o, _ in triples), tuple(signs[x] for x in ids))


# -- DT codes ---------------------------------------------------------------

def _dt_from_sequence(visits: Sequence[tuple[int, bool]]) -> tuple[int, ...]:
    labels: dict[int, list[int]] = {}
    for k, (x, _) in enumerate(visits):
        labels.setdefault(x, []).append(k + 1)
    code = {}
    for x, (a, b) in labels.items():
        odd, even = (a, b) if a % 2 else (b, a)
        if odd % 2 == 0 or even % 2:
            raise DiagramError("visit labels of a crossing must have opposite parity")
        over = visits[even - 1][1]
        code[odd] = -even if over else even
    return tuple(code[i] for i in range(1, 2 * len(labels), 2))


def dt_code(d: PlanarKnotDiagram) -> tuple[int, ...]:
    """DT code for the diagram's own traversal start and orientation."""
    return _dt_from_sequence(d.visits)


def _dt_key(code: Sequence[int]):
    return (tuple(abs(v) for v in code), tuple(v < 0 for v in code))


def canonical_dt(d: PlanarKnotDiagram) -> tuple[int, ...]:
    """Minimal DT code over all traversal starts and both orientations."""
    m = len(d.visits)
    if m == 0:
        return ()
    best = None
    for seq in (list(d.visits), list(reversed(d.visits))):
        for s in range(m):
            code = _dt_from_sequence(seq[s:] + seq[:s])
            if best is None or _dt_key(code) < _dt_key(best):
                best = code
    return best


def parse_dt(text: str) -> tuple[int, ...]:
    """Parse ``c`` followed by ``c`` signed even integers (whitespace or commas)."""
    toks = text.replace(",", " ").replace("[", " ").replace("]", " ").split()
    if not toks:
        raise DiagramError("empty DT code text")
    c = int(toks[0])
    vals = tuple(int(t) for t in toks[1:])
    if len(vals) != c:
        raise DiagramError(f"expected {c} DT entries, got {len(vals)}")
    return vals


def format_dt(code: Sequence[int]) -> str:
    return " ".join([str(len(code))] + [str(v) for v in code])


def _dt_visits(code: Sequence[int]) -> list[tuple[int, bool]]:
    c = len(code)
    if sorted(abs(v) for v in code) != list(range(2, 2 * c + 1, 2)):
        raise DiagramError("DT code must be a signed permutation of 2, 4, ..., 2c")
    visits: list[tuple[int, bool] | None] = [None] * (2 * c)
    for i, v in enumerate(code):
        even_over = v < 0
        visits[2 * i] = (i, not even_over)
        visits[abs(v) - 1] = (i, even_over)
    return visits  # type: ignore[return-value]


def from_dt(code: Sequence[int]) -> PlanarKnotDiagram:
    """Realize a DT code as a planar diagram.

    The crossing signs are not part of a DT code; they are recovered from a
    planar embedding of the code's graph (each crossing replaced by a rigid
    wheel so that the embedding fixes the cyclic order of its strand ends).
    """
    import networkx as nx

    code = tuple(int(v) for v in code)
    c = len(code)
    if c == 0:
        return PlanarKnotDiagram.unknot()
    visits = _dt_visits(code)
    m = 2 * c
    under = [0] * c
    over = [0] * c
    for k, (x, o) in enumerate(visits):
        (over if o else under)[x] = k

    # rim slots, counter-clockwise in the negative-crossing order
    def slot(x, name):
        return ("r", x, name)

    g = nx.Graph()
    for x in range(c):
        ring = [slot(x, "ui"), slot(x, "oi"), slot(x, "uo"), slot(x, "oo")]
        for i in range(4):
            g.add_edge(("h", x), ring[i])
            g.add_edge(ring[i], ring[(i + 1) % 4])
    for k in range(m):
        x, o = visits[k]
        y, p = visits[(k + 1) % m]
        g.add_edge(slot(x, "oo" if o else "uo"), ("e", k))
        g.add_edge(("e", k), slot(y, "oi" if p else "ui"))
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise DiagramError(f"DT code {code} is not realizable")
    signs = []
    for x in range(c):
        around = [v[2] for v in emb.neighbors_cw_order(("h", x))]
        # networkx lists clockwise; reverse to counter-clockwise
        around = around[::-1]
        i = around.index("ui")
        rot = around[i:] + around[:i]
        signs.append(-1 if rot[1] == "oi" else 1)
    d = PlanarKnotDiagram(tuple(visits), tuple(signs))
    return d


# -- predicates -------------------------------------------------------------

def _chord_positions(d: PlanarKnotDiagram):
    pos: dict[int, list[int]] = {}
    for k, (x, _) in enumerate(d.visits):
        pos.setdefault(x, []).append(k)
    return pos


def is_prime_diagram(d: PlanarKnotDiagram) -> bool:
    """True iff no cyclic interval of visits splits the chord diagram.

    A split interval touches a nonempty proper subset of the crossings and
    contains both visits of each crossing it touches.  A single kink has no
    nontrivial complement but still splits off; it is reported as not prime.
    """
    c = d.crossings
    if c == 0:
        return False
    if c == 1:
        return False
    m = 2 * c
    xs = [x for x, _ in d.visits]
    for start in range(m):
        open_count = 0
        inside = set()
        for length in range(1, m - 1):
            x = xs[(start + length - 1) % m]
            if x in inside:
                open_count -= 1
            else:
                inside.add(x)
                open_count += 1
            if open_count == 0 and len(inside) < c:
                return False
    return True


def nugatory_crossings(d: PlanarKnotDiagram) -> list[int]:
    """Crossings whose chord interleaves no other chord."""
    pos = _chord_positions(d)
    out = []
    for x, (a, b) in pos.items():
        inner = {y for y, _ in d.visits[a + 1 : b]}
        if all(pos[y][0] > a and pos[y][1] < b for y in inner):
            out.append(x)
    return sorted(out)


def is_reduced(d: PlanarKnotDiagram) -> bool:
    return not nugatory_crossings(d)


def is_alternating(d: PlanarKnotDiagram) -> bool:
    m = len(d.visits)
    return all(d.visits[k][1] != d.visits[(k + 1) % m][1] for k in range(m))


def mirror(d: PlanarKnotDiagram) -> PlanarKnotDiagram:
    return PlanarKnotDiagram(tuple((x, not o) for x, o in d.visits), tuple(-s for s in d.signs))


# -- simplification ---------------------------------------------------------

def _drop(d: PlanarKnotDiagram, drop: set[int], flip: Iterable[int] = ()) -> PlanarKnotDiagram:
    """Remove the visits at indices in ``drop``; toggle over flags at ``flip``."""
    flip = set(flip)
    keep = [(k, x, o) for k, (x, o) in enumerate(d.visits) if k not in drop]
    xs = sorted({x for _, x, _ in keep})
    remap = {x: i for i, x in enumerate(xs)}
    visits = tuple((remap[x], (not o) if k in flip else o) for k, x, o in keep)
    return PlanarKnotDiagram(visits, tuple(d.signs[x] for x in xs))


def _remove_kink(d: PlanarKnotDiagram):
    m = len(d.visits)
    for k in range(m):
        if d.visits[k][0] == d.visits[(k + 1) % m][0]:
            return _drop(d, {k, (k + 1) % m})
    return None


def _remove_nugatory(d: PlanarKnotDiagram):
    # Untwist: turn one side over, which swaps over/under along that side.
    pos = _chord_positions(d)
    for x in nugatory_crossings(d):
        a, b = pos[x]
        try:
            return _drop(d, {a, b}, flip=range(a + 1, b))
        except DiagramError:
            continue
    return None


def _remove_bigon(d: PlanarKnotDiagram):
    m = len(d.visits)
    for face in d.faces():
        if len(face) != 2:
            continue
        e1, e2 = face[0] >> 1, face[1] >> 1
        idx = {e1, (e1 + 1) % m, e2, (e2 + 1) % m}
        if len(idx) != 4:
            continue
        if d.visits[e1][1] != d.visits[(e1 + 1) % m][1]:
            continue
        return _drop(d, idx)
    return None


def simplify(d: PlanarKnotDiagram) -> PlanarKnotDiagram:
    """Apply kink, nugatory-crossing and bigon (R2) removals to a fixed point."""
    while d.crossings:
        nd = _remove_kink(d) or _remove_nugatory(d) or _remove_bigon(d)
        if nd is None:
            break
        d = nd
    return d
