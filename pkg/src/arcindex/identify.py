"""Knot table, fingerprint matching and arc-index tabulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .diagram import PlanarKnotDiagram, from_dt, is_alternating
from .grid import GridDiagram, connected_sum
from .invariants import Fingerprint, fingerprint

__all__ = [
    "KnotTableEntry",
    "KnotTable",
    "TableCollision",
    "UnidentifiedClass",
    "ClassRegistry",
    "TabulationReport",
    "load_table",
    "default_table_path",
    "match",
    "tabulate",
    "census",
]

UNKNOT = "unknot"


class TableCollision(ValueError):
    """Two table entries share a fingerprint."""


@dataclass(frozen=True)
class KnotTableEntry:
    name: str
    crossing_number: int
    alternating: bool
    dt: tuple[int, ...]
    fp: Fingerprint
    diagram: PlanarKnotDiagram = field(compare=False, repr=False)


@dataclass
class KnotTable:
    entries: list[KnotTableEntry]
    by_fp: dict[Fingerprint, KnotTableEntry]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, name: str) -> KnotTableEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(e.name == name for e in self.entries)

    @classmethod
    def empty(cls) -> "KnotTable":
        return cls([], {})


def default_table_path() -> Path:
    return Path(str(resources.files("arcindex") / "data" / "knot_table.txt"))


def _parse_table(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 3 or parts[2] not in ("A", "N"):
            raise ValueError(f"line {lineno}: expected 'name crossings A|N dt...'")
        yield parts[0], int(parts[1]), parts[2] == "A", tuple(int(v) for v in parts[3:])


@lru_cache(maxsize=4)
def _load_cached(path: str) -> KnotTable:
    entries = []
    by_fp: dict[Fingerprint, KnotTableEntry] = {}
    for name, c, alt, dt in _parse_table(Path(path).read_text()):
        if len(dt) != c:
            raise ValueError(f"{name}: DT code length {len(dt)} != crossing number {c}")
        d = from_dt(dt)
        if is_alternating(d) != alt:
            raise ValueError(f"{name}: alternating flag disagrees with its DT code")
        e = KnotTableEntry(name, c, alt, dt, fingerprint(d), d)
        if e.fp in by_fp:
            raise TableCollision(f"fingerprint collision between {by_fp[e.fp].name} and {name}")
        by_fp[e.fp] = e
        entries.append(e)
    return KnotTable(entries, by_fp)


def load_table(path: str | Path | None = None) -> KnotTable:
    """Load, realize and fingerprint the knot table (the shipped asset by default)."""
    return _load_cached(str(Path(path) if path is not None else default_table_path()))


@dataclass(frozen=True)
class UnidentifiedClass:
    id: int

    def __str__(self):
        return f"U{self.id}"


class ClassRegistry:
    """Stable ids for fingerprints missing from the table, in first-seen order."""

    def __init__(self):
        self._ids: dict[Fingerprint, int] = {}

    def get(self, fp: Fingerprint) -> UnidentifiedClass:
        if fp not in self._ids:
            self._ids[fp] = len(self._ids) + 1
        return UnidentifiedClass(self._ids[fp])


def match(fp: Fingerprint, table: KnotTable, registry: ClassRegistry | None = None):
    """Table name for ``fp``, ``"unknot"``, or an :class:`UnidentifiedClass`."""
    if fp.is_unknot():
        return UNKNOT
    e = table.by_fp.get(fp)
    if e is not None:
        return e.name
    return (registry or ClassRegistry()).get(fp)


# -- tabulation ---------------------------------------------------------------

@dataclass
class KnotClass:
    label: str
    arc_index: int
    fp: Fingerprint
    grid: GridDiagram
    crossing_number: int | None  # table crossing number, None if unidentified
    diagram_crossings: int = 0


@dataclass
class TabulationReport:
    classes: list[KnotClass] = field(default_factory=list)
    composites: list[KnotClass] = field(default_factory=list)
    arc_indices: list[int] = field(default_factory=list)

    def identified(self, alpha: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for k in self.classes:
            if k.arc_index == alpha and k.crossing_number is not None:
                out[k.crossing_number] = out.get(k.crossing_number, 0) + 1
        return dict(sorted(out.items()))

    def unidentified(self, alpha: int) -> list[KnotClass]:
        return [k for k in self.classes if k.arc_index == alpha and k.crossing_number is None]

    def names(self, alpha: int) -> list[str]:
        return [k.label for k in self.classes if k.arc_index == alpha]

    def subtotal(self, alpha: int) -> int:
        return sum(self.identified(alpha).values()) + len(self.unidentified(alpha))

    @property
    def counts(self) -> dict[tuple[int, int], int]:
        return {(a, c): v for a in self.arc_indices for c, v in self.identified(a).items()}

    def to_tsv(self) -> str:
        lines = ["arc_index\tcrossings\tcount\tknots"]
        for a in self.arc_indices:
            for c, v in self.identified(a).items():
                names = [k.label for k in self.classes if k.arc_index == a and k.crossing_number == c]
                lines.append(f"{a}\t{c}\t{v}\t{','.join(names)}")
            un = self.unidentified(a)
            if un:
                lines.append(f"{a}\tunidentified\t{len(un)}\t{','.join(k.label for k in un)}")
            lines.append(f"{a}\tsubtotal\t{self.subtotal(a)}\t")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        """Crossing number down the side, arc index across, as in the usual census table."""
        alphas = self.arc_indices
        rows = sorted({c for a in alphas for c in self.identified(a)})
        width = 6
        head = "c \\ a".ljust(14) + "".join(str(a).rjust(width) for a in alphas)
        out = [head]
        for c in rows:
            out.append(str(c).ljust(14) + "".join(str(self.identified(a).get(c, "")).rjust(width) for a in alphas))
        out.append("unidentified".ljust(14) + "".join(str(len(self.unidentified(a)) or "").rjust(width) for a in alphas))
        out.append("subtotal".ljust(14) + "".join(str(self.subtotal(a)).rjust(width) for a in alphas))
        lines = "\n".join(out)
        extra = []
        for a in alphas:
            for k in self.unidentified(a):
                extra.append(
                    f"{k.label}: arc index {a}, {k.diagram_crossings} crossings in the grid diagram "
                    f"after simplification, grid {' '.join(f'{x},{y}' for x, y in k.grid.cols)}"
                )
        if extra:
            lines += "\n\n" + "\n".join(extra)
        return lines + "\n"


def _mirror_grid(g: GridDiagram) -> GridDiagram:
    return GridDiagram(g.n, tuple(tuple(sorted((g.n - 1 - a, g.n - 1 - b))) for a, b in g.cols))


class _CompositeCheck:
    """Recognize fingerprints of connected sums of classes already found."""

    def __init__(self):
        self._cache: dict[int, set[Fingerprint]] = {}

    def sums_at(self, n: int, classes: Sequence[KnotClass]) -> set[Fingerprint]:
        if n not in self._cache:
            fps: set[Fingerprint] = set()
            from .grid import to_planar

            for i, k1 in enumerate(classes):
                for k2 in classes[i:]:
                    if k1.arc_index + k2.arc_index - 2 != n:
                        continue
                    for g2 in (k2.grid, _mirror_grid(k2.grid)):
                        fps.add(fingerprint(to_planar(connected_sum(k1.grid, g2))))
            self._cache[n] = fps
        return self._cache[n]


def tabulate(candidates: Iterable[tuple[int, GridDiagram, Fingerprint, int]], table: KnotTable,
             exclude_composites: bool = True) -> TabulationReport:
    """Group candidates ``(n, grid, fingerprint, diagram_crossings)`` into knot classes.

    Candidates must come in census order (increasing ``n``, then decreasing
    norm); a class's arc index is the first ``n`` where it shows up.
    """
    report = TabulationReport()
    seen: set[Fingerprint] = set()
    registry = ClassRegistry()
    composite = _CompositeCheck()
    alphas: set[int] = set()
    for n, grid, fp, dcross in candidates:
        alphas.add(n)
        if fp in seen or fp.is_unknot():
            continue
        seen.add(fp)
        label = match(fp, table, registry)
        entry = table.by_fp.get(fp)
        k = KnotClass(str(label), n, fp, grid, entry.crossing_number if entry else None, dcross)
        if entry is None and exclude_composites and fp in composite.sums_at(n, report.classes):
            report.composites.append(k)
            continue
        report.classes.append(k)
    report.arc_indices = sorted(a for a in alphas if a >= 5) or []
    return report


def census(n_max: int, table: KnotTable | None = None, workers: int | None = None,
           m4_budget: int = 10_000, n_min: int = 5, progress=None) -> TabulationReport:
    """Enumerate sizes ``n_min..n_max`` and tabulate the knot classes found."""
    from .enumerate import Filters, generate_parallel

    table = load_table() if table is None else table
    filters = Filters(m4=True, m4_budget=m4_budget, prime=True)

    def stream():
        for n in range(n_min, n_max + 1):
            recs = generate_parallel(n, workers, filters, fingerprints=True)
            if progress is not None:
                progress(n, len(recs))
            for r in recs:
                yield n, r.grid, r.fingerprint, r.crossings

    report = tabulate(stream(), table)
    report.arc_indices = list(range(n_min, n_max + 1))
    return report
