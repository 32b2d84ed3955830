"""Enumeration of canonical knot grids of a fixed size.

The search fixes the top row to ``(0, g)`` where ``g`` is the smallest cyclic
gap anywhere in the matrix, fills the remaining rows in descending bitmask
order (so complete matrices appear in descending norm order), keeps only
matrices that are largest in their flip/shift orbit, and then runs the
bounded M4 search on each.  Survivors must also have a prime diagram.

Work is split into prefixes (the first two rows); each worker owns a set of
prefixes and the norm-ordered outputs are merged back into serial order.
"""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import multiprocessing as mp
import numpy as np

from . import kernels
from .diagram import canonical_dt, is_prime_diagram, simplify
from .grid import GridDiagram, Norm, NormVerdict, norm_value, to_planar

__all__ = [
    "SearchPrefix",
    "Filters",
    "CandidateRecord",
    "root_prefixes",
    "partition",
    "generate",
    "generate_parallel",
    "default_workers",
]

PREFIX_DEPTH = 2


def default_workers() -> int:
    return max(1, int(os.environ.get("ARCINDEX_WORKERS", "1")))


@dataclass(frozen=True)
class SearchPrefix:
    """Fixed top rows of the search, as pair indices and bitmasks."""

    n: int
    choices: tuple[int, ...]
    rows_fixed: tuple[int, ...]
    column_fill: tuple[int, ...]

    @property
    def id(self) -> str:
        return "p" + ".".join(str(c) for c in self.choices)


def _make_prefix(n: int, choices: Sequence[int]) -> SearchPrefix:
    p1, p2 = kernels.pair_tables(n)
    fill = [0] * n
    rows = []
    for k in choices:
        a, b = int(p1[k]), int(p2[k])
        fill[a] += 1
        fill[b] += 1
        rows.append((1 << (n - 1 - a)) | (1 << (n - 1 - b)))
    return SearchPrefix(n, tuple(int(k) for k in choices), tuple(rows), tuple(fill))


def _run_dfs(n: int, prefix: Sequence[int], stop_depth: int) -> tuple[np.ndarray, int]:
    cap = 1024
    width = n if stop_depth >= n else stop_depth
    while True:
        out = np.empty((cap, width), dtype=np.int64)
        records, leaves = kernels.dfs(n, np.asarray(prefix, dtype=np.int64), stop_depth, out, cap)
        if records >= 0:
            return out[:records].copy(), int(leaves)
        cap *= 8


def root_prefixes(n: int, depth: int = PREFIX_DEPTH) -> list[SearchPrefix]:
    """All feasible search prefixes of the given depth, in serial search order."""
    if n < 4:
        return []
    p1, p2 = kernels.pair_tables(n)
    out = []
    for g in range(2, n // 2 + 1):
        top = int(np.nonzero((p1 == 0) & (p2 == g))[0][0])
        if depth <= 1:
            out.append(_make_prefix(n, [top]))
            continue
        rows, _ = _run_dfs(n, [top], depth)
        out.extend(_make_prefix(n, r) for r in rows)
    return out


def partition(n: int, k: int, depth: int = PREFIX_DEPTH) -> list[list[SearchPrefix]]:
    """Split the search into ``k`` disjoint prefix sets (round-robin in serial order)."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return [root_prefixes(n, depth)]
    prefixes = root_prefixes(n, depth)
    return [prefixes[i::k] for i in range(k)]


@dataclass(frozen=True)
class Filters:
    """Which filters ``generate`` applies after the orbit-canonical search."""

    m4: bool = True
    m4_budget: int = 10_000
    prime: bool = True


@dataclass
class CandidateRecord:
    grid: GridDiagram
    norm: Norm
    dt: tuple[int, ...]
    provenance: str
    verdict: NormVerdict = NormVerdict.Maximal
    search_states: int = 0
    crossings: int = 0
    fingerprint: object = field(default=None, compare=False)

    def to_line(self) -> str:
        pairs = " ".join(f"{a},{b}" for a, b in self.grid.cols)
        dt = " ".join([str(len(self.dt))] + [str(v) for v in self.dt])
        return f"{self.grid.n}\t{pairs}\t{self.norm.grouped()}\t{dt}"


def _leaves_for_prefix(n: int, prefix: SearchPrefix) -> tuple[np.ndarray, int]:
    return _run_dfs(n, prefix.choices, n)


def _unknot_record() -> CandidateRecord:
    g = GridDiagram(2, ((0, 1), (0, 1)))
    return CandidateRecord(g, Norm(0b1111, 2), (), "n2", NormVerdict.Maximal, 1, 0)


def _process_leaf(n, masks, prefix_id, filters: Filters, want_fp: bool):
    states = 0
    verdict = NormVerdict.Maximal
    if filters.m4:
        code, states = kernels.m4_search(masks, n, filters.m4_budget, True)
        if code in (kernels.DESTAB, kernels.NOT_MAXIMAL):
            return None
        if code == kernels.INCONCLUSIVE:
            verdict = NormVerdict.Inconclusive
    grid = GridDiagram.from_row_masks(masks, n)
    diagram = simplify(to_planar(grid))
    if filters.prime and not is_prime_diagram(diagram):
        return None
    rec = CandidateRecord(
        grid,
        Norm(norm_value(masks, n), n),
        canonical_dt(diagram),
        prefix_id,
        verdict,
        int(states),
        diagram.crossings,
    )
    if want_fp:
        from .invariants import fingerprint

        rec.fingerprint = fingerprint(diagram)
    return rec


def _generate_prefixes(n, prefixes, filters, want_fp) -> Iterator[CandidateRecord]:
    for prefix in prefixes:
        leaves, _ = _leaves_for_prefix(n, prefix)
        for masks in leaves:
            rec = _process_leaf(n, masks, prefix.id, filters, want_fp)
            if rec is not None:
                yield rec


def generate(
    n: int,
    filters: Filters = Filters(),
    sink: Callable[[CandidateRecord], None] | None = None,
    prefixes: Iterable[SearchPrefix] | None = None,
    fingerprints: bool = False,
) -> Iterator[CandidateRecord]:
    """Stream surviving candidates of size ``n`` in strictly decreasing norm order.

    ``n == 2`` yields the 2x2 unknot grid; sizes 3 and 4 yield nothing.
    """
    if not 2 <= n <= 12:
        raise ValueError("grid size must be between 2 and 12")
    if n == 2:
        stream: Iterable[CandidateRecord] = [_unknot_record()]
    else:
        stream = _generate_prefixes(n, root_prefixes(n) if prefixes is None else prefixes, filters, fingerprints)
    for rec in stream:
        if sink is not None:
            sink(rec)
        yield rec


def _worker(args):
    n, choice_lists, filters, want_fp = args
    prefixes = [_make_prefix(n, c) for c in choice_lists]
    return list(_generate_prefixes(n, prefixes, filters, want_fp))


def generate_parallel(
    n: int,
    workers: int | None = None,
    filters: Filters = Filters(),
    fingerprints: bool = False,
) -> list[CandidateRecord]:
    """Like :func:`generate` but spread over processes; output order is identical."""
    workers = default_workers() if workers is None else workers
    if workers <= 1 or n <= 4:
        return list(generate(n, filters, fingerprints=fingerprints))
    parts = partition(n, workers)
    jobs = [(n, [p.choices for p in part], filters, fingerprints) for part in parts]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        results = list(pool.map(_worker, jobs))
    merged = heapq.merge(*results, key=lambda r: r.norm.value, reverse=True)
    return list(merged)
