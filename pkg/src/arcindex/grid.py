"""Grid diagrams (Cromwell matrices) and their symmetry moves.

A grid of size ``n`` is stored as ``n`` column pairs ``(row_lo, row_hi)``;
row 0 is the top row and column 0 the leftmost.  Vertical segments always
cross over horizontal ones.  The norm is the ``n*n``-bit number obtained by
concatenating the rows, top row first, each row left to right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .diagram import PlanarKnotDiagram

__all__ = [
    "GridDiagram",
    "GridError",
    "Norm",
    "Move",
    "MoveKind",
    "NormVerdict",
    "Position",
    "validate",
    "norm",
    "apply_move",
    "symmetry_orbit",
    "canonical",
    "is_norm_maximal",
    "canonicality_search",
    "destabilizable",
    "destabilize",
    "stabilize",
    "reduce_grid",
    "component_count",
    "connected_sum",
    "to_planar",
    "parse_grid",
    "format_grid",
]


class GridError(ValueError):
    """Invalid grid or move."""


@dataclass(frozen=True)
class GridDiagram:
    n: int
    cols: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "cols", tuple((int(a), int(b)) for a, b in self.cols))

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[int, int]]) -> "GridDiagram":
        """Build from row pairs ``(col_lo, col_hi)`` (the transpose description)."""
        n = len(rows)
        cols: list[list[int]] = [[] for _ in range(n)]
        for r, (a, b) in enumerate(rows):
            cols[a].append(r)
            cols[b].append(r)
        if any(len(c) != 2 for c in cols):
            raise GridError("every column needs exactly two entries")
        return cls(n, tuple((c[0], c[1]) for c in cols))

    @classmethod
    def from_matrix(cls, mat) -> "GridDiagram":
        mat = np.asarray(mat)
        n = mat.shape[0]
        cols = []
        for j in range(n):
            rows = np.nonzero(mat[:, j])[0]
            if len(rows) != 2:
                raise GridError(f"column {j} must have exactly two 1's")
            cols.append((int(rows[0]), int(rows[1])))
        return cls(n, tuple(cols))

    @classmethod
    def from_row_masks(cls, masks: Iterable[int], n: int) -> "GridDiagram":
        rows = []
        for m in masks:
            bits = [j for j in range(n) if (int(m) >> (n - 1 - j)) & 1]
            rows.append((bits[0], bits[1]))
        return cls.from_rows(rows)

    @cached_property
    def rows(self) -> tuple[tuple[int, int], ...]:
        """Row pairs ``(col_lo, col_hi)``."""
        rows: list[list[int]] = [[] for _ in range(self.n)]
        for j, (a, b) in enumerate(self.cols):
            rows[a].append(j)
            rows[b].append(j)
        return tuple((r[0], r[1]) for r in rows)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int8)
        for j, (a, b) in enumerate(self.cols):
            m[a, j] = 1
            m[b, j] = 1
        return m

    def row_masks(self) -> np.ndarray:
        n = self.n
        out = np.zeros(n, dtype=np.int64)
        for j, (a, b) in enumerate(self.cols):
            bit = 1 << (n - 1 - j)
            out[a] |= bit
            out[b] |= bit
        return out

    def __str__(self):
        return format_grid(self)


# -- validation and norm ----------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate(g: GridDiagram, allow_repeats: bool = False) -> Verdict:
    """Check the grid invariants; ``allow_repeats`` accepts repeated column pairs.

    A repeated pair closes a two-cell loop (a split unknot component), so it
    is only legal for counting components of an arbitrary Cromwell matrix.
    """
    n = g.n
    if n < 2:
        return Verdict(False, "size must be at least 2")
    if len(g.cols) != n:
        return Verdict(False, f"size mismatch: n={n} but {len(g.cols)} columns")
    counts = [0] * n
    for j, (a, b) in enumerate(g.cols):
        if not (0 <= a < n and 0 <= b < n):
            return Verdict(False, f"column {j}: row index out of range")
        if a >= b:
            return Verdict(False, f"column {j}: pair must satisfy row_lo < row_hi")
        counts[a] += 1
        counts[b] += 1
    for r, c in enumerate(counts):
        if c != 2:
            return Verdict(False, f"row {r} occurs {c} times (needs exactly 2)")
    if n > 2 and not allow_repeats and len(set(g.cols)) != n:
        return Verdict(False, "two columns carry the same pair")
    return Verdict(True)


def _require_valid(g: GridDiagram, allow_repeats: bool = False):
    v = validate(g, allow_repeats)
    if not v:
        raise GridError(v.reason)


@dataclass(frozen=True, order=True)
class Norm:
    """Row-major bit string of the matrix; ordered as a binary number."""

    value: int
    n: int

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.n * self.n}b")

    def grouped(self) -> str:
        b = self.bits
        return " ".join(b[i : i + self.n] for i in range(0, len(b), self.n))

    def __str__(self):
        return self.grouped()


def norm(g: GridDiagram) -> Norm:
    return Norm(norm_value(g.row_masks(), g.n), g.n)


def norm_value(masks, n: int) -> int:
    v = 0
    for m in masks:
        v = (v << n) | int(m)
    return v


# -- moves --------------------------------------------------------------------

class MoveKind(enum.Enum):
    FlipH = "FlipH"  # reverse the row order (mirror in a horizontal axis)
    FlipV = "FlipV"  # reverse the column order
    FlipDiag = "FlipDiag"  # transpose
    FlipAntidiag = "FlipAntidiag"
    Rot90 = "Rot90"  # quarter turn clockwise
    CycleRow = "CycleRow"  # first row moves to the bottom
    CycleCol = "CycleCol"  # first column moves to the right end
    SwapRows = "SwapRows"
    SwapCols = "SwapCols"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    index: int = 0

    def __str__(self):
        if self.kind in (MoveKind.SwapRows, MoveKind.SwapCols):
            return f"{self.kind.value}({self.index})"
        return self.kind.value


def _interleaved(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """True when the pairs interleave or share an index (M4 forbidden)."""
    a, b = sorted(p)
    c, d = sorted(q)
    if len({a, b, c, d}) < 4:
        return True
    return (a < c < b) != (a < d < b)


def _from_matrix_fn(g: GridDiagram, fn) -> GridDiagram:
    return GridDiagram.from_matrix(fn(g.matrix()))


def apply_move(g: GridDiagram, m: Move) -> GridDiagram:
    _require_valid(g)
    n = g.n
    k = m.kind
    if k is MoveKind.FlipH:
        return GridDiagram(n, tuple(tuple(sorted((n - 1 - a, n - 1 - b))) for a, b in g.cols))
    if k is MoveKind.FlipV:
        return GridDiagram(n, tuple(reversed(g.cols)))
    if k is MoveKind.FlipDiag:
        return _from_matrix_fn(g, lambda a: a.T)
    if k is MoveKind.FlipAntidiag:
        return _from_matrix_fn(g, lambda a: a[::-1, ::-1].T)
    if k is MoveKind.Rot90:
        return _from_matrix_fn(g, lambda a: np.rot90(a, -1))
    if k is MoveKind.CycleRow:
        return _from_matrix_fn(g, lambda a: np.roll(a, -1, axis=0))
    if k is MoveKind.CycleCol:
        return _from_matrix_fn(g, lambda a: np.roll(a, -1, axis=1))
    i = m.index
    if not 0 <= i < n - 1:
        raise GridError(f"swap index {i} out of range for n={n}")
    if k is MoveKind.SwapRows:
        if _interleaved(g.rows[i], g.rows[i + 1]):
            raise GridError(f"rows {i} and {i + 1} interleave or share a column")
        swap = {i: i + 1, i + 1: i}
        return GridDiagram(n, tuple(tuple(sorted((swap.get(a, a), swap.get(b, b)))) for a, b in g.cols))
    if k is MoveKind.SwapCols:
        if _interleaved(g.cols[i], g.cols[i + 1]):
            raise GridError(f"columns {i} and {i + 1} interleave or share a row")
        cols = list(g.cols)
        cols[i], cols[i + 1] = cols[i + 1], cols[i]
        return GridDiagram(n, tuple(cols))
    raise GridError(f"unknown move {m}")


def symmetry_orbit(g: GridDiagram) -> set[GridDiagram]:
    """All grids reachable by flips, rotations and cyclic shifts."""
    _require_valid(g)
    base = g.matrix()
    out = set()
    for t in (base, base.T):
        for m in (t, t[::-1], t[:, ::-1], t[::-1, ::-1]):
            for a in range(g.n):
                for b in range(g.n):
                    out.add(GridDiagram.from_matrix(np.roll(np.roll(m, a, axis=0), b, axis=1)))
    return out


def canonical(g: GridDiagram) -> GridDiagram:
    """Largest-norm member of the flip/rotation/shift orbit."""
    _require_valid(g)
    masks = kernels.canonical_masks(g.row_masks(), g.n)
    return GridDiagram.from_row_masks(masks, g.n)


class NormVerdict(enum.Enum):
    Maximal = "Maximal"
    NotMaximal = "NotMaximal"
    Inconclusive = "Inconclusive"


@dataclass(frozen=True)
class SearchResult:
    verdict: NormVerdict
    destabilizable: bool
    states: int


def canonicality_search(g: GridDiagram, budget: int = 10_000, stop_on_destab: bool = True) -> SearchResult:
    """Bounded search over M1-M4 from ``g``.

    States are orbits under flips, rotations and cyclic shifts, explored
    through adjacent non-interleaved row/column swaps.  Reports whether a
    larger norm or (with ``stop_on_destab``) a cyclic adjacency was reached.
    """
    _require_valid(g)
    code, states = kernels.m4_search(g.row_masks(), g.n, budget, stop_on_destab)
    if code == kernels.DESTAB:
        return SearchResult(NormVerdict.Inconclusive, True, states)
    verdict = {
        kernels.MAXIMAL: NormVerdict.Maximal,
        kernels.NOT_MAXIMAL: NormVerdict.NotMaximal,
        kernels.INCONCLUSIVE: NormVerdict.Inconclusive,
    }[code]
    return SearchResult(verdict, False, states)


def is_norm_maximal(g: GridDiagram, budget: int = 100_000) -> NormVerdict:
    return canonicality_search(g, budget, stop_on_destab=False).verdict


# -- (de)stabilization --------------------------------------------------------

@dataclass(frozen=True)
class Position:
    """Two 1's in ``line`` (a row if ``axis == 'row'``) at adjacent indices ``a``, ``b``."""

    axis: str
    line: int
    a: int
    b: int


def destabilizable(g: GridDiagram, cyclic: bool = True) -> Position | None:
    _require_valid(g)
    n = g.n
    for axis, pairs in (("row", g.rows), ("col", g.cols)):
        for line, (a, b) in enumerate(pairs):
            if b - a == 1:
                return Position(axis, line, a, b)
            if cyclic and b - a == n - 1:
                return Position(axis, line, b, a)
    return None


def _destab_cols(g: GridDiagram, row: int, j: int) -> GridDiagram:
    # row ``row`` has its two 1's in columns j and j+1
    n = g.n
    (a1, b1), (a2, b2) = g.cols[j], g.cols[j + 1]
    x = b1 if a1 == row else a1
    y = b2 if a2 == row else a2

    def shift(r):
        return r - 1 if r > row else r

    merged = tuple(sorted((shift(x), shift(y))))
    cols = [tuple(sorted((shift(a), shift(b)))) for a, b in g.cols]
    cols[j] = merged
    del cols[j + 1]
    return GridDiagram(n - 1, tuple(cols))


def destabilize(g: GridDiagram, pos: Position) -> GridDiagram:
    _require_valid(g)
    n = g.n
    if n <= 2:
        raise GridError("a 2x2 grid cannot be destabilized")
    pairs = g.rows if pos.axis == "row" else g.cols
    if not 0 <= pos.line < n or set(pairs[pos.line]) != {pos.a, pos.b}:
        raise GridError("stale destabilization position")
    if (pos.b - pos.a) % n != 1:
        raise GridError("entries are not adjacent")
    # bring the adjacent pair to indices (0, 1) by a cyclic shift
    shift = pos.a
    if pos.axis == "row":
        m = np.roll(g.matrix(), -shift, axis=1)
        return _destab_cols(GridDiagram.from_matrix(m), pos.line, 0)
    m = np.roll(g.matrix(), -shift, axis=0).T
    t = _destab_cols(GridDiagram.from_matrix(m), pos.line, 0)
    return GridDiagram.from_matrix(t.matrix().T)


def stabilize(g: GridDiagram, col: int, row: int) -> GridDiagram:
    """Split column ``col`` with a new row inserted before index ``row``.

    The new row carries adjacent 1's in columns ``col`` and ``col+1``, so
    :func:`destabilize` undoes the move.
    """
    _require_valid(g)
    n = g.n
    if not (0 <= col < n and 0 <= row <= n):
        raise GridError("stabilization position out of range")

    def shift(r):
        return r + 1 if r >= row else r

    a, b = g.cols[col]
    cols = [tuple(sorted((shift(x), shift(y)))) for x, y in g.cols]
    cols[col] = tuple(sorted((shift(a), row)))
    cols.insert(col + 1, tuple(sorted((row, shift(b)))))
    return GridDiagram(n + 1, tuple(cols))


def _isotopy_neighbours(g: GridDiagram):
    yield apply_move(g, Move(MoveKind.CycleRow))
    yield apply_move(g, Move(MoveKind.CycleCol))
    for i in range(g.n - 1):
        if not _interleaved(g.rows[i], g.rows[i + 1]):
            yield apply_move(g, Move(MoveKind.SwapRows, i))
        if not _interleaved(g.cols[i], g.cols[i + 1]):
            yield apply_move(g, Move(MoveKind.SwapCols, i))


def reduce_grid(g: GridDiagram, budget: int = 5_000) -> GridDiagram:
    """Destabilize as far as a bounded search finds room.

    Only knot-type preserving moves are used (cyclic shifts and
    non-interleaved swaps, no flips), so the result is isotopic to ``g``, not
    merely up to mirror.  Each round explores at most ``budget`` grids
    breadth-first and destabilizes the first one with an adjacency.
    """
    _require_valid(g)
    while g.n > 2:
        pos = destabilizable(g)
        if pos is not None:
            g = destabilize(g, pos)
            continue
        seen = {g}
        queue = [g]
        hit = None
        for cur in queue:
            for nb in _isotopy_neighbours(cur):
                if nb in seen:
                    continue
                if destabilizable(nb) is not None:
                    hit = nb
                    break
                if len(seen) >= budget:
                    break
                seen.add(nb)
                queue.append(nb)
            if hit is not None or len(seen) >= budget:
                break
        if hit is None:
            return g
        g = hit
    return g


# -- components, sums, planar diagrams ------------------------------------------

def component_count(g: GridDiagram) -> int:
    _require_valid(g, allow_repeats=True)
    n = g.n
    rows = g.rows
    seen = [False] * n
    comps = 0
    for start in range(n):
        if seen[start]:
            continue
        comps += 1
        j = start
        r = g.cols[j][0]
        while not seen[j]:
            seen[j] = True
            a, b = rows[r]
            j = b if a == j else a
            lo, hi = g.cols[j]
            r = hi if lo == r else lo
    return comps


def _roll_to(g: GridDiagram, r: int, c: int, tr: int, tc: int) -> GridDiagram:
    m = np.roll(np.roll(g.matrix(), tr - r, axis=0), tc - c, axis=1)
    return GridDiagram.from_matrix(m)


def connected_sum(g1: GridDiagram, g2: GridDiagram) -> GridDiagram:
    """Place ``g1`` and ``g2`` diagonally, sharing one corner row and column.

    The shared corner is dropped, which leaves a nugatory crossing joining
    the two summands; the result has size ``n1 + n2 - 1``.
    """
    for g in (g1, g2):
        _require_valid(g)
        if component_count(g) != 1:
            raise GridError("connected sum needs knots (one component)")
    n1, n2 = g1.n, g2.n
    a = _roll_to(g1, g1.cols[0][0], 0, n1 - 1, n1 - 1).matrix()
    b = _roll_to(g2, g2.cols[0][0], 0, 0, 0).matrix()
    n = n1 + n2 - 1
    m = np.zeros((n, n), dtype=np.int8)
    m[:n1, :n1] |= a
    m[n1 - 1 :, n1 - 1 :] |= b
    m[n1 - 1, n1 - 1] = 0
    return GridDiagram.from_matrix(m)


def to_planar(g: GridDiagram) -> PlanarKnotDiagram:
    """Planar diagram of the grid; verticals cross over horizontals.

    Traversal starts at the lower end of column 0 and goes up.
    """
    _require_valid(g)
    if component_count(g) != 1:
        raise GridError("to_planar handles knots only")
    n = g.n
    rows = g.rows
    ids: dict[tuple[int, int], int] = {}
    signs: dict[int, int] = {}
    visits: list[tuple[int, bool]] = []

    def crossing(r, c):
        if (r, c) not in ids:
            ids[(r, c)] = len(ids)
        return ids[(r, c)]

    col = 0
    r_from, r_to = g.cols[0][1], g.cols[0][0]
    for _ in range(n):
        # vertical segment in column ``col`` from r_from to r_to
        step = 1 if r_to > r_from else -1
        for r in range(r_from + step, r_to, step):
            a, b = rows[r]
            if a < col < b:
                visits.append((crossing(r, col), True))
        # horizontal segment along row r_to
        a, b = rows[r_to]
        c_to = b if a == col else a
        cstep = 1 if c_to > col else -1
        for c in range(col + cstep, c_to, cstep):
            lo, hi = g.cols[c]
            if lo < r_to < hi:
                visits.append((crossing(r_to, c), False))
        col = c_to
        lo, hi = g.cols[col]
        r_from, r_to = r_to, (hi if lo == r_to else lo)
    # signs: over = vertical, under = horizontal; y axis points up (toward row 0)
    dirs: dict[int, list] = {}
    col = 0
    r_from, r_to = g.cols[0][1], g.cols[0][0]
    for _ in range(n):
        vdir = 1 if r_to < r_from else -1  # +1 means upward
        for r in range(min(r_from, r_to) + 1, max(r_from, r_to)):
            if (r, col) in ids:
                dirs.setdefault(ids[(r, col)], [0, 0])[0] = vdir
        a, b = rows[r_to]
        c_to = b if a == col else a
        hdir = 1 if c_to > col else -1
        for c in range(min(col, c_to) + 1, max(col, c_to)):
            if (r_to, c) in ids:
                dirs.setdefault(ids[(r_to, c)], [0, 0])[1] = hdir
        col = c_to
        lo, hi = g.cols[col]
        r_from, r_to = r_to, (hi if lo == r_to else lo)
    for x, (vdir, hdir) in dirs.items():
        # over = (0, vdir), under = (hdir, 0); sign of over x under
        signs[x] = 1 if (0 * 0 - vdir * hdir) > 0 else -1
    return PlanarKnotDiagram(tuple(visits), tuple(signs[x] for x in range(len(ids))))


# -- text format --------------------------------------------------------------

def format_grid(g: GridDiagram) -> str:
    return f"{g.n}\n" + " ".join(f"{a},{b}" for a, b in g.cols)


def parse_grid(text: str) -> GridDiagram:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise GridError("grid text needs a size line and a column line")
    n = int(lines[0])
    cols = []
    for tok in lines[1].split():
        a, b = tok.split(",")
        cols.append((int(a), int(b)))
    g = GridDiagram(n, tuple(cols))
    _require_valid(g)
    return g
