"""Knot-spoke diagrams and their contraction to arc presentations.

A knot-spoke diagram is a knot diagram in which one vertex ``v0`` has been
opened into a vertical binder axis.  Every strand end at ``v0`` sits at a
height, and the two ends at the same height are joined through the binder.  A
spoke is a page arc: it leaves the binder at one height and comes back at
another, inside one vertical half-plane.  All other vertices are ordinary
4-valent crossings.

Contracting an edge from ``v0`` to a crossing pulls the crossing into the
binder.  The strand through the crossing that continues the contracted edge
keeps its height, and the transverse strand is parked at a new height below
or above everything.  Once only spokes remain, the hub is an arc presentation
and reads off as a grid diagram.

Darts are inherited from the source :class:`PlanarKnotDiagram` (``2k`` and
``2k+1`` are the two ends of edge ``k``) and never renumbered, so a sequence
of operations is replayable from the source diagram.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .diagram import PlanarKnotDiagram, is_alternating, is_prime_diagram, is_reduced
from .grid import GridDiagram

__all__ = [
    "V0",
    "End",
    "Spoke",
    "Crossing",
    "KnotSpokeDiagram",
    "KnotSpokeError",
    "LemmaViolation",
    "CaseFailure",
    "TraceError",
    "Wheel",
    "TraceStep",
    "ContractionTrace",
    "apply_step",
    "from_planar",
    "contract",
    "fold",
    "shrink",
    "shrinkable",
    "split_loop",
    "cut_point",
    "admissible_edges",
    "select_edges",
    "repair_cutpoint",
    "to_wheel",
    "wheel_to_grid",
    "planar_diagram",
    "NonAlternatingDual",
    "nonalt_dual",
    "Site",
    "classify_site",
    "reduce_nonalternating",
    "verify_trace",
]

V0 = -1


class KnotSpokeError(ValueError):
    """An operation was applied outside its preconditions."""


class LemmaViolation(RuntimeError):
    """Fewer than two cut-point-free contractions exist where two are guaranteed."""


class CaseFailure(RuntimeError):
    """The non-alternating reduction could not discharge a case.

    ``tag`` names the case and ``state`` is the serialized trace so far.
    """

    def __init__(self, tag: str, message: str, state: str = ""):
        super().__init__(f"[{tag}] {message}")
        self.tag = tag
        self.message = message
        self.state = state


class TraceError(ValueError):
    """Replay or verification of a trace failed at ``line`` (1-based step number)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"step {line}: {message}")
        self.line = line
        self.message = message


# -- diagram ----------------------------------------------------------------------

@dataclass(frozen=True)
class End:
    """Strand end of a non-spoke edge at the hub."""

    dart: int
    height: int


@dataclass(frozen=True)
class Spoke:
    low: int
    high: int

    def __post_init__(self):
        if self.low > self.high:
            lo, hi = self.high, self.low
            object.__setattr__(self, "low", lo)
            object.__setattr__(self, "high", hi)

    @property
    def heights(self) -> tuple[int, int]:
        return (self.low, self.high)


@dataclass(frozen=True)
class Crossing:
    """Darts counter-clockwise; the strand ``darts[over], darts[over + 2]`` is on top."""

    darts: tuple[int, int, int, int]
    over: int

    def is_over(self, pos: int) -> bool:
        return pos % 2 == self.over


class KnotSpokeDiagram:
    """Immutable knot-spoke diagram.

    ``hub`` lists the slots around ``v0`` counter-clockwise; ``crossings``
    maps crossing ids (from the source diagram) to their rotation.
    """

    __slots__ = ("hub", "crossings", "_where", "_faces", "_key")

    def __init__(self, hub: Iterable[End | Spoke], crossings: dict[int, Crossing]):
        self.hub = tuple(hub)
        self.crossings = dict(crossings)
        self._where = None
        self._faces = None
        self._key = None

    # -- lookups -------------------------------------------------------------
    def where(self, dart: int) -> tuple[int, int]:
        """``(vertex, position)`` of a dart; the vertex is ``V0`` for hub ends."""
        if self._where is None:
            w = {}
            for i, s in enumerate(self.hub):
                if isinstance(s, End):
                    w[s.dart] = (V0, i)
            for x, cr in self.crossings.items():
                for p, d in enumerate(cr.darts):
                    w[d] = (x, p)
            self._where = w
        return self._where[dart]

    def has_dart(self, dart: int) -> bool:
        try:
            self.where(dart)
        except KeyError:
            return False
        return True

    @property
    def ends(self) -> list[End]:
        return [s for s in self.hub if isinstance(s, End)]

    @property
    def spokes(self) -> list[Spoke]:
        return [s for s in self.hub if isinstance(s, Spoke)]

    @property
    def spoke_count(self) -> int:
        return sum(isinstance(s, Spoke) for s in self.hub)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def heights(self) -> list[int]:
        hs = []
        for s in self.hub:
            hs.extend((s.height,) if isinstance(s, End) else s.heights)
        return hs

    @property
    def top(self) -> int:
        return max(self.heights())

    @property
    def bottom(self) -> int:
        return min(self.heights())

    def is_loop(self, dart: int) -> bool:
        return self.where(dart)[0] == V0 and self.where(dart ^ 1)[0] == V0

    def is_wheel(self) -> bool:
        return not self.crossings and not self.ends

    # -- faces ---------------------------------------------------------------
    def _succ(self, dart: int) -> int:
        v, p = self.where(dart)
        if v != V0:
            return self.crossings[v].darts[(p + 1) % 4]
        m = len(self.hub)
        for k in range(1, m + 1):
            s = self.hub[(p + k) % m]
            if isinstance(s, End):
                return s.dart
        raise AssertionError("unreachable")

    def faces(self) -> list[list[int]]:
        """Faces of the non-spoke graph as dart cycles of ``d -> succ(d ^ 1)``."""
        if self._faces is None:
            darts = [s.dart for s in self.ends]
            for cr in self.crossings.values():
                darts.extend(cr.darts)
            seen = set()
            faces = []
            for d0 in sorted(darts):
                if d0 in seen:
                    continue
                face = []
                d = d0
                while d not in seen:
                    seen.add(d)
                    face.append(d)
                    d = self._succ(d ^ 1)
                faces.append(face)
            self._faces = faces
        return self._faces

    @property
    def regions(self) -> int:
        """Regions of the plane cut out by the non-spoke edges (1 if there are none)."""
        return max(1, len(self.faces()))

    @property
    def spokes_plus_regions(self) -> int:
        return self.spoke_count + self.regions

    # -- checks --------------------------------------------------------------
    def validate(self) -> None:
        """Raise :class:`KnotSpokeError` unless the structural invariants hold."""
        ends = self.ends
        darts = [e.dart for e in ends]
        for cr in self.crossings.values():
            darts.extend(cr.darts)
            if cr.over not in (0, 1):
                raise KnotSpokeError("crossing over flag must be 0 or 1")
        ds = set(darts)
        if len(ds) != len(darts):
            raise KnotSpokeError("dart used twice")
        if any(d ^ 1 not in ds for d in ds):
            raise KnotSpokeError("dangling dart")
        if self.crossings and not ends:
            raise KnotSpokeError("crossings without a path to v0")
        if ends and len(ends) < 2:
            raise KnotSpokeError("v0 has a single strand end")
        count: dict[int, int] = {}
        for h in self.heights():
            count[h] = count.get(h, 0) + 1
        if any(v != 2 for v in count.values()):
            raise KnotSpokeError("every binder height must join exactly two ends")
        if any(isinstance(s, Spoke) and s.low == s.high for s in self.hub):
            raise KnotSpokeError("spoke with equal heights")
        if ends:
            v = 1 + len(self.crossings)
            e = len(ds) // 2
            if v - e + len(self.faces()) != 2:
                raise KnotSpokeError("rotation system is not planar (Euler check)")
        if _component_count(self) != 1:
            raise KnotSpokeError("diagram is not a single knot")

    def key(self) -> tuple:
        """Hashable state with heights replaced by their ranks."""
        if self._key is None:
            rank = {h: i for i, h in enumerate(sorted(set(self.heights())))}
            hub = tuple(
                ("e", s.dart, rank[s.height]) if isinstance(s, End) else ("s", rank[s.low], rank[s.high])
                for s in self.hub
            )
            self._key = (hub, tuple(sorted(self.crossings)))
        return self._key

    def digest(self) -> str:
        return hashlib.sha1(repr(self.key()).encode()).hexdigest()[:10]

    def __eq__(self, other):
        return isinstance(other, KnotSpokeDiagram) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"KnotSpokeDiagram(crossings={self.crossing_count}, spokes={self.spoke_count}, "
                f"regions={self.regions}, hub={describe_hub(self)})")


def describe_hub(D: KnotSpokeDiagram) -> str:
    rank = {h: i for i, h in enumerate(sorted(set(D.heights())))}
    out = []
    for s in D.hub:
        if isinstance(s, End):
            out.append(f"e{s.dart}@{rank[s.height]}")
        else:
            out.append(f"s{rank[s.low]}-{rank[s.high]}")
    return " ".join(out)


def _far_end(D: KnotSpokeDiagram, i: int, h: int) -> tuple[int, int]:
    """End ``(slot, height)`` reached by leaving the binder at height ``h`` through slot ``i``."""
    s = D.hub[i]
    if isinstance(s, Spoke):
        return i, (s.high if h == s.low else s.low)
    d = s.dart
    while True:
        v, p = D.where(d ^ 1)
        if v == V0:
            return p, D.hub[p].height
        d = D.crossings[v].darts[(p + 2) % 4]


def _binder_ends(D: KnotSpokeDiagram) -> dict[int, list[tuple[int, int]]]:
    ends_at: dict[int, list[tuple[int, int]]] = {}
    for i, s in enumerate(D.hub):
        for h in ((s.height,) if isinstance(s, End) else s.heights):
            ends_at.setdefault(h, []).append((i, h))
    return ends_at


def _component_count(D: KnotSpokeDiagram) -> int:
    """Closed curves traced through binder heights, spokes and edges."""
    ends_at = _binder_ends(D)
    seen: set[int] = set()
    comps = 0
    for h0 in ends_at:
        if h0 in seen:
            continue
        comps += 1
        arrived = ends_at[h0][0]
        while arrived[1] not in seen:
            seen.add(arrived[1])
            a, b = ends_at[arrived[1]]
            leave = b if a == arrived else a
            arrived = _far_end(D, leave[0], leave[1])
    return comps


# -- construction and rewriting ---------------------------------------------------

def from_planar(d: PlanarKnotDiagram, v0: int = 0) -> KnotSpokeDiagram:
    """Promote crossing ``v0`` of a reduced prime diagram to the hub.

    The under strand's two ends sit at height 0 and the over strand's at 1;
    there are no spokes yet.
    """
    if d.crossings == 0:
        raise KnotSpokeError("a crossingless diagram has no vertex to promote")
    if not is_reduced(d):
        raise KnotSpokeError("diagram has nugatory crossings")
    if not is_prime_diagram(d):
        raise KnotSpokeError("diagram is not prime")
    if not 0 <= v0 < d.crossings:
        raise KnotSpokeError(f"no crossing {v0}")
    hub: list[End] = []
    crossings = {}
    for x in range(d.crossings):
        rot = d.rotation(x)  # under strand at positions 0 and 2
        if x == v0:
            hub = [End(rot[i], i % 2) for i in range(4)]
        else:
            crossings[x] = Crossing(rot, 1)
    return KnotSpokeDiagram(hub, crossings)


def _between(m: int, p: int, q: int) -> list[int]:
    """Hub indices strictly after ``p`` and before ``q``, going around."""
    out = []
    k = (p + 1) % m
    while k != q:
        out.append(k)
        k = (k + 1) % m
    return out


def _spoke_only(D: KnotSpokeDiagram, idx: Sequence[int]) -> bool:
    return all(isinstance(D.hub[k], Spoke) for k in idx)


def _clear(h: int, spokes: Iterable[Spoke]) -> bool:
    return all(not (s.low < h < s.high) for s in spokes)


def _fold_plan(D: KnotSpokeDiagram, dart: int):
    """Where a loop at the hub can be folded into a spoke, or ``None``.

    A loop can be folded when one side of it holds only spokes.  If that side
    is not empty, the loop is first moved across those spokes at the height
    of one of its ends, so that end must clear every spoke on that side; the
    page then sits next to the other end.  Returns ``(keep, drop)`` hub
    indices: the spoke replaces slot ``keep`` and slot ``drop`` disappears.
    """
    v, p = D.where(dart)
    w, q = D.where(dart ^ 1)
    if v != V0 or w != V0:
        return None
    m = len(D.hub)
    sides = [_between(m, p, q), _between(m, q, p)]
    inner = [s for s in sides if _spoke_only(D, s)]
    if len(inner) != 1:
        return None  # either both sides carry edges, or this is the last edge
    side = inner[0]
    if not side:
        return (p, q)
    hp, hq = D.hub[p].height, D.hub[q].height
    spokes = [D.hub[k] for k in side]
    if _clear(hp, spokes):
        return (q, p)
    if _clear(hq, spokes):
        return (p, q)
    return None


def fold(D: KnotSpokeDiagram, dart: int) -> KnotSpokeDiagram:
    """Replace a hub loop that bounds no non-spoke edge by a spoke."""
    plan = _fold_plan(D, dart)
    if plan is None:
        raise KnotSpokeError(f"loop through dart {dart} cannot be folded")
    keep, drop = plan
    a, b = D.hub[keep], D.hub[drop]
    hub = list(D.hub)
    hub[keep] = Spoke(a.height, b.height)
    del hub[drop]
    return KnotSpokeDiagram(hub, D.crossings)


def contract(D: KnotSpokeDiagram, dart: int) -> KnotSpokeDiagram:
    """Contract the edge of hub end ``dart`` into the hub.

    With ``e, e_bar, e', e_bar'`` the darts at the far crossing in
    counter-clockwise order, the hub slot of ``e`` becomes
    ``e_bar, e', e_bar'``.  ``e'`` inherits the height of ``e``; ``e_bar`` and
    ``e_bar'`` share a new height above everything if their strand was the
    over strand and below everything otherwise.  Loops formed by ``e_bar`` or
    ``e_bar'`` are folded into spokes; a loop formed by ``e'`` is kept.
    """
    try:
        v, i = D.where(dart)
    except KeyError:
        raise KnotSpokeError(f"dart {dart} is not in the diagram") from None
    if v != V0:
        raise KnotSpokeError(f"dart {dart} is not at v0")
    x, k = D.where(dart ^ 1)
    if x == V0:
        raise KnotSpokeError(f"dart {dart} belongs to a loop")
    cr = D.crossings[x]
    a, b, c = (cr.darts[(k + j) % 4] for j in (1, 2, 3))
    if a ^ 1 in (b, c) or b ^ 1 == c:
        raise KnotSpokeError(f"crossing {x} carries a kink")
    h = D.hub[i].height
    new = D.top + 1 if cr.is_over(k + 1) else D.bottom - 1
    hub = list(D.hub)
    hub[i : i + 1] = [End(a, new), End(b, h), End(c, new)]
    crossings = {y: z for y, z in D.crossings.items() if y != x}
    out = KnotSpokeDiagram(hub, crossings)
    for t in (a, c):
        if out.is_loop(t):
            plan = _fold_plan(out, t)
            if plan is not None:
                out = fold(out, t)
    return out


def shrinkable(D: KnotSpokeDiagram) -> list[int]:
    """Hub indices of spokes whose two heights are adjacent in the binder."""
    hs = sorted(set(D.heights()))
    nxt = {hs[j]: hs[j + 1] for j in range(len(hs) - 1)}
    if D.spoke_count + len(D.ends) <= 2:
        return []
    return [i for i, s in enumerate(D.hub) if isinstance(s, Spoke) and nxt.get(s.low) == s.high]


def shrink(D: KnotSpokeDiagram, index: int) -> KnotSpokeDiagram:
    """Shrink a spoke with adjacent heights into the binder (one page fewer).

    The page disk between the two heights is empty, so the arc slides onto the
    binder and its two binder points merge.
    """
    if index not in shrinkable(D):
        raise KnotSpokeError(f"slot {index} is not a spoke with adjacent heights")
    sp = D.hub[index]
    hub = [s for j, s in enumerate(D.hub) if j != index]
    lo, hi = sp.low, sp.high
    out = []
    for s in hub:
        if isinstance(s, End):
            out.append(End(s.dart, lo) if s.height == hi else s)
        else:
            out.append(Spoke(*(lo if h == hi else h for h in s.heights)))
    res = KnotSpokeDiagram(out, D.crossings)
    if any(isinstance(s, Spoke) and s.low == s.high for s in res.hub):
        raise KnotSpokeError("shrinking would leave a degenerate spoke")
    return res


def split_loop(D: KnotSpokeDiagram) -> KnotSpokeDiagram:
    """Turn the last non-spoke edge, a hub loop, into two spokes.

    The middle of the loop is pushed to a new top height and pinched onto the
    binder there, which leaves one page at each end of the loop.
    """
    ends = D.ends
    if D.crossings or len(ends) != 2 or not D.is_loop(ends[0].dart):
        raise KnotSpokeError("split_loop needs a single loop and no crossings")
    top = D.top + 1
    hub = [Spoke(s.height, top) if isinstance(s, End) else s for s in D.hub]
    return KnotSpokeDiagram(hub, D.crossings)


# -- cut points and edge selection ----------------------------------------------

def cut_point(D: KnotSpokeDiagram) -> int | None:
    """A vertex met twice by one face of the non-spoke graph, ``v0`` first; else ``None``."""
    found = None
    for face in D.faces():
        seen = set()
        for d in face:
            v = D.where(d)[0]
            if v in seen:
                if v == V0:
                    return V0
                found = v if found is None else found
            seen.add(v)
    return found


def admissible_edges(D: KnotSpokeDiagram) -> list[int]:
    """Hub ends whose contraction leaves a cut-point-free diagram."""
    out = []
    for s in D.hub:
        if not isinstance(s, End) or D.where(s.dart ^ 1)[0] == V0:
            continue
        try:
            De = contract(D, s.dart)
        except KnotSpokeError:
            continue
        if cut_point(De) is None:
            out.append(s.dart)
    return out


def select_edges(D: KnotSpokeDiagram) -> tuple[int, int]:
    """Two hub ends whose contractions are cut-point free.

    Raises :class:`LemmaViolation` if fewer than two exist although ``D`` is
    cut-point free with a crossing left, which the theory rules out.
    """
    if not D.crossings:
        raise KnotSpokeError("no crossing left: v0 is the only multi-valent vertex")
    if cut_point(D) is not None:
        raise KnotSpokeError("select_edges needs a cut-point-free diagram")
    found = admissible_edges(D)
    if len(found) < 2:
        raise LemmaViolation(
            f"only {len(found)} cut-point-free contraction(s) at hub {describe_hub(D)} "
            f"with {D.crossing_count} crossings left"
        )
    return found[0], found[1]


# -- realization as a planar diagram ----------------------------------------------

_TILTS = tuple(math.pi * (j + 0.41) / 7 for j in range(7))


def _hub_rays(D: KnotSpokeDiagram):
    """Rays ``(slot, height, angle)`` leaving the binder, one per strand end."""
    m = len(D.hub)
    rays = []
    for k, s in enumerate(D.hub):
        theta = 2 * math.pi * (k + 0.5 + 0.2 * math.sin(1.7 * k + 0.3)) / m
        for h in ((s.height,) if isinstance(s, End) else s.heights):
            rays.append((k, h, theta))
    return rays


def _ray_crossings(rays, tilt: float):
    """Pairwise crossings of the hub rays seen from a slightly tilted viewpoint.

    The binder, viewed at a small tilt, spreads out along the direction
    ``tilt``; the end at height ``h`` leaves the point ``rank(h) * w`` along
    its slot's angle.  Higher strands pass over lower ones.
    """
    wx, wy = math.cos(tilt), math.sin(tilt)
    ranks = {h: r for r, h in enumerate(sorted({h for _, h, _ in rays}))}
    pts = []
    for _, h, th in rays:
        r = ranks[h] + 0.05 * math.sin(3.1 * ranks[h] + 0.7)
        pts.append((r * wx, r * wy, math.cos(th), math.sin(th)))
    hits = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            if rays[i][0] == rays[j][0] or rays[i][1] == rays[j][1]:
                continue
            px, py, ux, uy = pts[i]
            qx, qy, vx, vy = pts[j]
            den = ux * vy - uy * vx
            if abs(den) < 1e-12:
                continue
            dx, dy = qx - px, qy - py
            t = (dx * vy - dy * vx) / den
            s = (dx * uy - dy * ux) / den
            if t > 1e-12 and s > 1e-12:
                hits.append((i, j, t, s))
    return hits, pts


def planar_diagram(D: KnotSpokeDiagram) -> PlanarKnotDiagram:
    """A planar diagram of the knot described by ``D``.

    Crossings away from the hub are kept; near the hub the binder is viewed
    at a small tilt, which resolves the strand ends into rays that cross
    according to their heights.  The tilt direction with the fewest hub
    crossings is used.
    """
    rays = _hub_rays(D)
    best = None
    for tilt in _TILTS:
        if any(abs(math.sin(th - tilt)) < 1e-6 for _, _, th in rays):
            continue
        hits, pts = _ray_crossings(rays, tilt)
        if best is None or len(hits) < len(best[0]):
            best = (hits, pts)
    hits, pts = best
    along: list[list[tuple[float, tuple]]] = [[] for _ in rays]
    over_ray: dict[tuple, int] = {}
    for i, j, t, s in hits:
        cid = ("h", i, j)
        along[i].append((t, cid))
        along[j].append((s, cid))
        over_ray[cid] = i if rays[i][1] > rays[j][1] else j
    for lst in along:
        lst.sort()
        for (t1, _), (t2, _) in zip(lst, lst[1:]):
            if t2 - t1 < 1e-9:
                raise KnotSpokeError("degenerate hub projection")

    ray_of: dict[tuple[int, int], int] = {(k, h): r for r, (k, h, _) in enumerate(rays)}
    at_height: dict[int, list[int]] = {}
    for r, (_, h, _) in enumerate(rays):
        at_height.setdefault(h, []).append(r)

    visits: list[tuple] = []
    hub_dir: dict[tuple, dict[int, int]] = {}
    arrive: dict[int, dict[bool, int]] = {}

    def run_ray(r, outward):
        lst = along[r] if outward else along[r][::-1]
        for _, cid in lst:
            visits.append((cid, over_ray[cid] == r))
            hub_dir.setdefault(cid, {})[r] = 1 if outward else -1

    start = 0
    r = start
    steps = 0
    while True:
        steps += 1
        if steps > 4 * len(rays) + 4:
            raise KnotSpokeError("hub strands do not close up")
        run_ray(r, True)
        k, h, _ = rays[r]
        s = D.hub[k]
        if isinstance(s, Spoke):
            r2 = ray_of[(k, s.high if h == s.low else s.low)]
        else:
            d = s.dart
            while True:
                v, p = D.where(d ^ 1)
                if v == V0:
                    r2 = ray_of[(p, D.hub[p].height)]
                    break
                cr = D.crossings[v]
                over = cr.is_over(p)
                visits.append((("x", v), over))
                arrive.setdefault(v, {})[over] = d ^ 1
                d = cr.darts[(p + 2) % 4]
        run_ray(r2, False)
        a, b = at_height[rays[r2][1]]
        r = b if a == r2 else a
        if r == start:
            break
    if len(visits) != 2 * (len(hits) + len(D.crossings)):
        raise KnotSpokeError("diagram is not a single knot")

    signs: dict[tuple, int] = {}
    for cid, dirs in hub_dir.items():
        i, j = cid[1], cid[2]
        o = over_ray[cid]
        u = j if o == i else i
        _, _, ox, oy = pts[o]
        _, _, ux, uy = pts[u]
        ox, oy = ox * dirs[o], oy * dirs[o]
        ux, uy = ux * dirs[u], uy * dirs[u]
        signs[cid] = 1 if ox * uy - oy * ux > 0 else -1
    for v, arr in arrive.items():
        rot = D.crossings[v].darts
        ui, oi = arr[False], arr[True]
        oo = rot[(rot.index(oi) + 2) % 4]
        signs[("x", v)] = 1 if rot[(rot.index(ui) + 1) % 4] == oo else -1
    ids: dict[tuple, int] = {}
    triples = []
    for cid, over in visits:
        ids.setdefault(cid, len(ids))
        triples.append((ids[cid], over, signs[cid]))
    if not triples:
        return PlanarKnotDiagram.unknot()
    return PlanarKnotDiagram.from_visits(triples)


# -- wheels ------------------------------------------------------------------------

@dataclass(frozen=True)
class Wheel:
    """Spokes in counter-clockwise order; an arc presentation with one page per spoke."""

    spokes: tuple[Spoke, ...]

    def __post_init__(self):
        count: dict[int, int] = {}
        for s in self.spokes:
            if s.low == s.high:
                raise KnotSpokeError("spoke with equal heights")
            for h in s.heights:
                count[h] = count.get(h, 0) + 1
        if any(v != 2 for v in count.values()):
            raise KnotSpokeError("every binder height must be used by exactly two spokes")

    @property
    def size(self) -> int:
        return len(self.spokes)

    @classmethod
    def from_diagram(cls, D: KnotSpokeDiagram) -> "Wheel":
        if not D.is_wheel():
            raise KnotSpokeError("diagram still has non-spoke edges")
        return cls(tuple(D.hub))

    def diagram(self) -> KnotSpokeDiagram:
        return KnotSpokeDiagram(self.spokes, {})


def wheel_to_grid(w: Wheel) -> GridDiagram:
    """Grid with one column per spoke (angular order) and one row per height.

    Columns follow the spokes counter-clockwise and the top row is the
    highest binder point; with vertical strands over horizontal ones this is
    the same knot, not its mirror image.
    """
    hs = sorted({h for s in w.spokes for h in s.heights}, reverse=True)
    row = {h: i for i, h in enumerate(hs)}
    cols = [tuple(sorted((row[s.low], row[s.high]))) for s in w.spokes]
    return GridDiagram(len(cols), tuple(cols))


# -- traces ------------------------------------------------------------------------

_SR_DELTA = {"promote": None, "contract": 0, "fold": 0, "shrink": -1, "split": 1}


@dataclass(frozen=True)
class TraceStep:
    """One rewrite: ``promote v0``, ``contract dart``, ``fold dart``, ``shrink slot`` or ``split``.

    ``sr`` (spokes plus regions) and ``key`` (state digest) are recorded after
    the step so a replay can detect divergence; ``tag`` names the role of the
    step (a case of the non-alternating reduction or a cut-point repair).
    """

    op: str
    arg: int | None = None
    tag: str = ""
    sr: int | None = None
    key: str = ""

    def to_line(self) -> str:
        parts = [self.op] + ([str(self.arg)] if self.arg is not None else [])
        if self.sr is not None:
            parts.append(f"sr={self.sr}")
        if self.key:
            parts.append(f"key={self.key}")
        if self.tag:
            parts.append(f"tag={self.tag}")
        return " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "TraceStep":
        toks = line.split()
        if not toks or toks[0] not in _SR_DELTA:
            raise ValueError(f"unknown trace step {line!r}")
        op, arg, kw = toks[0], None, {}
        for tok in toks[1:]:
            if "=" in tok:
                k, v = tok.split("=", 1)
                kw[k] = v
            elif arg is None:
                arg = int(tok)
            else:
                raise ValueError(f"unexpected token {tok!r} in {line!r}")
        return cls(op, arg, kw.get("tag", ""), int(kw["sr"]) if "sr" in kw else None, kw.get("key", ""))


def apply_step(D: KnotSpokeDiagram | None, step: TraceStep, source: PlanarKnotDiagram) -> KnotSpokeDiagram:
    if step.op == "promote":
        if D is not None:
            raise KnotSpokeError("promote must be the first step")
        return from_planar(source, 0 if step.arg is None else step.arg)
    if D is None:
        raise KnotSpokeError("trace must start with promote")
    if step.op == "contract":
        return contract(D, step.arg)
    if step.op == "fold":
        return fold(D, step.arg)
    if step.op == "shrink":
        return shrink(D, step.arg)
    if step.op == "split":
        return split_loop(D)
    raise KnotSpokeError(f"unknown step {step.op}")


@dataclass
class ContractionTrace:
    """Rewrites taking ``source`` to a wheel; the first step promotes ``v0``."""

    source: PlanarKnotDiagram
    steps: list[TraceStep] = field(default_factory=list)
    fingerprint: str = ""

    def record(self, op: str, D: KnotSpokeDiagram, arg: int | None = None, tag: str = "") -> None:
        self.steps.append(TraceStep(op, arg, tag, D.spokes_plus_regions, D.digest()))

    @property
    def v0(self) -> int:
        return self.steps[0].arg if self.steps else 0

    def serialize(self) -> str:
        lines = [f"source {self.source.gauss_text()}"]
        if self.fingerprint:
            lines.append(f"fingerprint {self.fingerprint}")
        lines += [s.to_line() for s in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ContractionTrace":
        source = None
        fp = ""
        steps = []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("source"):
                source = PlanarKnotDiagram.from_gauss_text(line[len("source"):])
            elif line.startswith("fingerprint"):
                fp = line[len("fingerprint"):].strip()
            else:
                try:
                    steps.append(TraceStep.parse(line))
                except ValueError as exc:
                    raise TraceError(len(steps) + 1, str(exc)) from None
        if source is None:
            raise TraceError(0, "trace has no source line")
        return cls(source, steps, fp)

    def replay(self, source: PlanarKnotDiagram | None = None) -> KnotSpokeDiagram:
        D = None
        for n, step in enumerate(self.steps, 1):
            try:
                D = apply_step(D, step, self.source if source is None else source)
            except KnotSpokeError as exc:
                raise TraceError(n, str(exc)) from None
        if D is None:
            raise TraceError(0, "empty trace")
        return D


def _fingerprint_text(d: PlanarKnotDiagram) -> str:
    from .invariants import fingerprint

    return fingerprint(d).serialize()


def verify_trace(trace: ContractionTrace, source: PlanarKnotDiagram | None = None,
                 check_fingerprint: bool = True) -> list[int]:
    """Replay ``trace`` on ``source`` (default: its own) checking every step.

    Each step must reproduce the recorded spokes-plus-regions count and state
    digest, change the count by the amount its kind allows (contractions and
    folds keep it, shrinking lowers it by one, the final split raises it by
    one), leave a valid diagram and, if requested, keep the fingerprint.
    Returns the spokes-plus-regions sequence; raises :class:`TraceError` at
    the first bad step.
    """
    src = trace.source if source is None else source
    want = trace.fingerprint or (_fingerprint_text(trace.source) if check_fingerprint else "")
    D = None
    out = []
    for n, step in enumerate(trace.steps, 1):
        before = None if D is None else D.spokes_plus_regions
        try:
            D = apply_step(D, step, src)
            D.validate()
        except KnotSpokeError as exc:
            raise TraceError(n, str(exc)) from None
        sr = D.spokes_plus_regions
        delta = _SR_DELTA[step.op]
        if delta is not None and sr - before != delta:
            raise TraceError(n, f"{step.op} changed spokes+regions by {sr - before}, expected {delta}")
        if step.sr is not None and step.sr != sr:
            raise TraceError(n, f"spokes+regions {sr} differs from recorded {step.sr}")
        if step.key and step.key != D.digest():
            raise TraceError(n, "state differs from the recorded one")
        if check_fingerprint and want and _fingerprint_text(planar_diagram(D)) != want:
            raise TraceError(n, "fingerprint changed")
        out.append(sr)
    if D is None or not D.is_wheel():
        raise TraceError(len(trace.steps), "trace does not end in a wheel")
    return out


# -- contraction to a wheel -------------------------------------------------------

def to_wheel(d: PlanarKnotDiagram, v0: int = 0) -> tuple[Wheel, ContractionTrace]:
    """Contract a reduced prime diagram to a wheel with ``c + 2`` spokes.

    Each step contracts the first edge offered by :func:`select_edges`, so
    every intermediate diagram is cut-point free and spokes plus regions stay
    at ``c + 2``; the final loop becomes two spokes.
    """
    D = from_planar(d, v0)
    trace = ContractionTrace(d)
    trace.record("promote", D, v0)
    while D.crossings:
        e, _ = select_edges(D)
        D = contract(D, e)
        trace.record("contract", D, e)
    D = split_loop(D)
    trace.record("split", D)
    return Wheel.from_diagram(D), trace


# -- cut-point repair ----------------------------------------------------------------

def _hub_blocks(D: KnotSpokeDiagram) -> dict[int, int]:
    """Block id of every hub end: ends are in one block iff joined away from ``v0``."""
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for s in D.ends:
        v = D.where(s.dart ^ 1)[0]
        union(("d", s.dart), ("d", s.dart ^ 1) if v == V0 else ("x", v))
    for x, cr in D.crossings.items():
        for d in cr.darts:
            v = D.where(d ^ 1)[0]
            if v != V0:
                union(("x", x), ("x", v))
    roots: dict = {}
    return {s.dart: roots.setdefault(find(("d", s.dart)), len(roots)) for s in D.ends}


def _repair_case(D: KnotSpokeDiagram, dart: int) -> tuple[str, set[int]]:
    """Case tag of a cut-point-creating contraction and the crossings to clear.

    The three new hub ends ``e_bar, e', e_bar'`` fall into blocks of the
    contracted diagram: ``case1`` when ``e_bar`` is alone, ``case2`` when
    ``e_bar'`` is alone, ``case3`` when all three are apart.  Everything
    outside the block of ``e_bar'`` has to be turned into spokes.
    """
    x, k = D.where(dart ^ 1)
    a, b, c = (D.crossings[x].darts[(k + j) % 4] for j in (1, 2, 3))
    De = contract(D, dart)
    blocks = _hub_blocks(De)
    fresh = iter(range(-1, -4, -1))
    ba, bb, bc = (blocks.get(t, next(fresh)) for t in (a, b, c))
    if ba != bc and bb == bc:
        tag = "case1"
    elif ba == bb and bb != bc:
        tag = "case2"
    elif len({ba, bb, bc}) == 3:
        tag = "case3"
    else:
        tag = "unclassified"
    keep = {y for y in De.crossings if bc >= 0 and any(
        blocks.get(s.dart) == bc and _reaches(De, s.dart, y) for s in De.ends)}
    clear = (set(D.crossings) - keep)
    return tag, clear


def _reaches(D: KnotSpokeDiagram, dart: int, target: int) -> bool:
    seen = set()
    stack = [D.where(dart ^ 1)[0]]
    while stack:
        v = stack.pop()
        if v == V0 or v in seen:
            continue
        if v == target:
            return True
        seen.add(v)
        stack.extend(D.where(d ^ 1)[0] for d in D.crossings[v].darts)
    return False


def repair_cutpoint(D: KnotSpokeDiagram, dart: int, budget: int = 20_000) -> tuple[str, list[int]]:
    """Contraction sequence replacing the cut-point-creating contraction of ``dart``.

    ``contract(D, dart)`` must have the hub as a cut-point.  The returned
    darts contract every crossing on the far side of the separating curve
    (including the one ``dart`` leads to) so that side ends up as spokes and
    the result is cut-point free again.  Returns ``(case tag, darts)``.
    """
    if cut_point(D) is not None:
        raise KnotSpokeError("repair_cutpoint needs a cut-point-free diagram")
    if cut_point(contract(D, dart)) != V0:
        raise KnotSpokeError("contracting this edge does not create a cut-point at v0")
    tag, clear = _repair_case(D, dart)
    if tag == "unclassified":
        raise CaseFailure("repair", f"cannot place the new ends of dart {dart} in cases 1-3",
                          describe_hub(D))
    seen: set = set()
    count = [0]

    def dfs(E: KnotSpokeDiagram, path: list[int]):
        if not clear & set(E.crossings):
            return path if cut_point(E) is None else None
        count[0] += 1
        if count[0] > budget or E.key() in seen:
            return None
        seen.add(E.key())
        for s in E.ends:
            y = E.where(s.dart ^ 1)[0]
            if y == V0 or y not in clear:
                continue
            try:
                F = contract(E, s.dart)
            except KnotSpokeError:
                continue
            r = dfs(F, path + [s.dart])
            if r is not None:
                return r
        return None

    found = dfs(D, [])
    if found is None:
        raise CaseFailure(tag, f"no contraction order clears the far side of dart {dart}",
                          describe_hub(D))
    return tag, found


# -- non-alternating structure ----------------------------------------------------------

def _edge_alternates(d: PlanarKnotDiagram, k: int) -> bool:
    m = len(d.visits)
    return d.visits[k][1] != d.visits[(k + 1) % m][1]


@dataclass
class NonAlternatingDual:
    """Dual edges of the non-alternating edges, as a multigraph on the faces."""

    graph: object  # networkx.MultiGraph on face indices
    alternating_region: dict[int, bool]
    faces: list[list[int]]


def nonalt_dual(d: PlanarKnotDiagram) -> NonAlternatingDual:
    """Build the dual subgraph of non-alternating edges and check its structure.

    Every vertex has even degree, no edge is a bridge, every cycle is even
    and there are no parallel edges.  A violation means the diagram is not a
    prime reduced diagram and raises :class:`KnotSpokeError`.
    """
    import networkx as nx

    faces = d.faces()
    face_of = {}
    for i, f in enumerate(faces):
        for dart in f:
            face_of[dart] = i
    g = nx.MultiGraph()
    g.add_nodes_from(range(len(faces)))
    alt = {i: True for i in range(len(faces))}
    for k in range(len(d.visits)):
        if _edge_alternates(d, k):
            continue
        a, b = face_of[2 * k], face_of[2 * k + 1]
        g.add_edge(a, b, edge=k)
        alt[a] = alt[b] = False
    problems = []
    if any(deg % 2 for _, deg in g.degree()):
        problems.append("odd vertex")
    simple = nx.Graph(g)
    if simple.number_of_edges() != g.number_of_edges():
        problems.append("bigon")
    if any(nx.selfloop_edges(g)):
        problems.append("self-loop")
    if any(True for _ in nx.bridges(simple)):
        problems.append("bridge")
    if not nx.is_bipartite(simple):
        problems.append("odd cycle")
    if problems:
        raise KnotSpokeError("non-alternating dual violates: " + ", ".join(problems))
    return NonAlternatingDual(g, alt, faces)


@dataclass(frozen=True)
class Site:
    """Where the non-alternating reduction starts.

    ``case`` is ``"I"``, ``"II"`` or ``"III"`` (``pattern`` 1 or 2 for the
    last); ``edge`` is the Gauss edge index locating it; ``regions`` are the
    face indices of the two regions involved; ``hubs`` are candidate crossings
    to promote, best first.
    """

    case: str
    edge: int
    regions: tuple[int, int]
    hubs: tuple[int, ...]
    pattern: int | None = None

    @property
    def tag(self) -> str:
        return f"case{self.case}" + (f".{self.pattern}" if self.pattern else "")


def _face_index(d: PlanarKnotDiagram) -> dict[int, int]:
    return {dart: i for i, f in enumerate(d.faces()) for dart in f}


def _hub_candidates(d: PlanarKnotDiagram, faces: Sequence[int], first: Sequence[int] = ()) -> tuple[int, ...]:
    out = list(dict.fromkeys(first))
    for i in faces:
        for dart in d.faces()[i]:
            x = d.dart_vertex(dart)
            if x not in out:
                out.append(x)
    out += [x for x in range(d.crossings) if x not in out]
    return tuple(out)


def _sites(d: PlanarKnotDiagram) -> Iterator[Site]:
    m = len(d.visits)
    fi = _face_index(d)
    faces = d.faces()
    vis = d.visits

    def pred_vertex(face: int, dart: int) -> int:
        f = faces[face]
        return d.dart_vertex(f[(f.index(dart) - 1) % len(f)])

    # Case I: three consecutive passes on the same level
    for k in range(m):
        if vis[k][1] == vis[(k + 1) % m][1] == vis[(k + 2) % m][1]:
            sides = [(fi[2 * k], fi[2 * ((k + 1) % m)], 2 * k), (fi[2 * ((k + 1) % m) + 1], fi[2 * k + 1], 2 * ((k + 1) % m) + 1)]
            hubs = [pred_vertex(r1, dart) for r1, _, dart in sides]
            yield Site("I", k, sides[0][:2], _hub_candidates(d, [sides[0][0], sides[0][1], sides[1][0], sides[1][1]], hubs))
    # Cases II and III: the strand crossing an end of a non-alternating edge
    pairs = d._pairs()
    for k in range(m):
        if _edge_alternates(d, k):
            continue
        kinds = []
        for j in (k, (k + 1) % m):
            x = vis[j][0]
            u, o = pairs[x]
            other = o if u == j else u
            kinds.append((_edge_alternates(d, (other - 1) % m), _edge_alternates(d, other), other))
        regions = (fi[2 * k], fi[2 * k + 1])
        for a1, a2, other in kinds:
            if a1 and a2:
                yield Site("II", k, regions, _hub_candidates(d, regions))
                break
        else:
            if all(a1 != a2 for a1, a2, _ in kinds):
                # side of the edge holding each crossing strand's non-alternating half
                sides = []
                for a1, a2, other in kinds:
                    e = (other - 1) % m if not a1 else other
                    sides.append({fi[2 * e], fi[2 * e + 1]} & set(regions))
                pattern = 1 if sides[0] & sides[1] else 2
                yield Site("III", k, regions, _hub_candidates(d, regions), pattern)


def classify_site(d: PlanarKnotDiagram) -> Site:
    """First site in Gauss order, preferring Case I, then II, then III."""
    if d.crossings == 0 or is_alternating(d):
        raise KnotSpokeError("classify_site needs a non-alternating diagram")
    if not is_reduced(d) or not is_prime_diagram(d):
        raise KnotSpokeError("classify_site needs a reduced prime diagram")
    found = list(_sites(d))
    for case in ("I", "II", "III"):
        for s in found:
            if s.case == case:
                return s
    raise CaseFailure("classify", "no Case I, II or III site found", d.gauss_text())


# -- the non-alternating reduction ---------------------------------------------------

def _settle(D: KnotSpokeDiagram, trace: list) -> KnotSpokeDiagram:
    """Shrink spokes with adjacent heights until none is left."""
    while True:
        sh = shrinkable(D)
        if not sh:
            return D
        D = shrink(D, sh[0])
        trace.append(("shrink", sh[0], "isotopy", D))


def _finish(D: KnotSpokeDiagram, trace: list) -> KnotSpokeDiagram | None:
    """Fold leftover hub loops, then split the last one; ``None`` if stuck."""
    while len(D.ends) > 2:
        for s in D.ends:
            if _fold_plan(D, s.dart) is not None:
                D = fold(D, s.dart)
                trace.append(("fold", s.dart, "loop", D))
                break
        else:
            return None
        D = _settle(D, trace)
    if D.ends:
        D = split_loop(D)
        trace.append(("split", None, "", D))
        D = _settle(D, trace)
    return D


def _reduce_from(d: PlanarKnotDiagram, v0: int, target: int, budget: int, tag: str):
    """Depth-first search over contraction orders from hub ``v0``.

    Contractions that let a spoke shrink come first, then those keeping the
    diagram cut-point free.  Contractions that create a cut-point are allowed;
    they open a repair, tagged with its case, that later contractions close.
    """
    seen: set = set()
    nodes = [0]

    def dfs(D: KnotSpokeDiagram, trace: list):
        D = _settle(D, trace)
        if not D.crossings:
            n = len(trace)
            W = _finish(D, trace)
            if W is not None and W.spoke_count <= target:
                return trace
            del trace[n:]
            return None
        nodes[0] += 1
        if nodes[0] > budget or D.key() in seen:
            return None
        seen.add(D.key())
        inside_repair = cut_point(D) is not None
        options = []
        for s in D.ends:
            if D.where(s.dart ^ 1)[0] == V0:
                continue
            try:
                De = contract(D, s.dart)
            except KnotSpokeError:
                continue
            opens = cut_point(De) is not None
            options.append((-len(shrinkable(De)), opens, s.dart, De))
        options.sort(key=lambda o: o[:3])
        for _, opens, dart, De in options:
            if inside_repair:
                step_tag = "repair"
            elif opens:
                step_tag = "repair." + _repair_case(D, dart)[0]
            else:
                step_tag = tag
            n = len(trace)
            trace.append(("contract", dart, step_tag, De))
            r = dfs(De, trace)
            if r is not None:
                return r
            del trace[n:]
        return None

    D0 = from_planar(d, v0)
    found = dfs(D0, [("promote", v0, tag, D0)])
    return found, nodes[0]


def reduce_nonalternating(d: PlanarKnotDiagram, budget: int = 20_000) -> tuple[Wheel, ContractionTrace]:
    """Contract a non-alternating minimal diagram to a wheel with at most ``c`` spokes.

    The site found by :func:`classify_site` picks the promoted crossing and
    tags the steps.  Two spoke shrinks are needed on top of the plain
    contraction, each one the isotopy of an arc lying above (or below) a
    triangular region at the hub.  Raises :class:`CaseFailure` with the case
    tag if no candidate hub reaches the bound within ``budget`` search nodes
    per hub (smaller budgets are tried on every hub first).
    """
    site = classify_site(d)
    nonalt_dual(d)
    target = d.crossings
    explored = []
    # cheap passes over every candidate hub before expensive ones
    rounds = [b for b in (200, 2_000) if b < budget] + [budget]
    for limit in rounds:
        for v0 in site.hubs:
            found, nodes = _reduce_from(d, v0, target, limit, site.tag)
            explored.append(f"v0={v0}:{nodes}")
            if found is not None:
                trace = ContractionTrace(d)
                for op, arg, tag, D in found:
                    trace.record(op, D, arg, tag)
                return Wheel.from_diagram(found[-1][3]), trace
    raise CaseFailure(site.tag, f"no wheel with <= {target} spokes found", " ".join(explored))
