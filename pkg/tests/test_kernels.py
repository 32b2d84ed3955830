"""The compiled kernels against their own Python bodies and against plain oracles."""

import random

import numpy as np
import pytest

from arcindex import kernels
from arcindex.grid import GridDiagram, Move, MoveKind, apply_move, canonical, destabilizable, norm, symmetry_orbit

from conftest import random_knot_grid

requires_numba = pytest.mark.skipif(not kernels.ENABLED, reason="numba disabled")


def _py(fn):
    return getattr(fn, "py_func", fn)


@pytest.fixture(scope="module")
def grids():
    rng = random.Random(7)
    return [random_knot_grid(rng, 3, 8) for _ in range(150)]


def test_canonical_is_orbit_maximum(grids):
    for g in grids[:40]:
        best = max(symmetry_orbit(g), key=lambda h: norm(h).value)
        assert canonical(g) == best


def test_has_adjacency_matches_scan(grids):
    for g in grids:
        assert bool(kernels.has_adjacency(g.row_masks(), g.n)) == (destabilizable(g) is not None)


def test_is_canonical(grids):
    for g in grids:
        c = canonical(g)
        imgs = np.empty((8, g.n), np.int64)
        assert kernels.is_canonical(c.row_masks(), g.n, imgs)
        for h in symmetry_orbit(g):
            if h != c and h.row_masks()[0] == c.row_masks()[0]:
                assert not kernels.is_canonical(h.row_masks(), g.n, imgs)


@requires_numba
def test_compiled_and_python_agree(grids):
    for g in grids:
        m, n = g.row_masks(), g.n
        assert (kernels.canonical_masks(m, n) == _py(kernels.canonical_masks)(m, n)).all()
        assert kernels.m4_search(m, n, 500, True) == _py(kernels.m4_search)(m, n, 500, True)
        assert kernels.m4_search(m, n, 500, False) == _py(kernels.m4_search)(m, n, 500, False)


@requires_numba
def test_dfs_compiled_and_python_agree():
    for n in (5, 6):
        for g in range(2, n // 2 + 1):
            p1, p2 = kernels.pair_tables(n)
            top = int(np.nonzero((p1 == 0) & (p2 == g))[0][0])
            prefix = np.array([top], np.int64)
            a = np.empty((4096, n), np.int64)
            b = np.empty((4096, n), np.int64)
            ra = kernels.dfs(n, prefix, n, a, 4096)
            rb = _py(kernels.dfs)(n, prefix, n, b, 4096)
            assert ra == rb
            assert (a[: ra[0]] == b[: rb[0]]).all()


def test_m4_swap_neighbours_are_moves():
    # a single allowed swap found by the kernel is a legal grid move
    g = GridDiagram(5, ((1, 4), (0, 3), (2, 4), (1, 3), (0, 2)))
    for i in range(4):
        try:
            apply_move(g, Move(MoveKind.SwapCols, i))
        except ValueError:
            continue
    assert kernels.m4_search(canonical(g).row_masks(), 5, 10_000, True)[0] == kernels.MAXIMAL


def test_dfs_overflow_signal():
    out = np.empty((1, 6), np.int64)
    p1, p2 = kernels.pair_tables(6)
    top = int(np.nonzero((p1 == 0) & (p2 == 2))[0][0])
    records, _ = kernels.dfs(6, np.array([top], np.int64), 6, out, 1)
    assert records == -1
