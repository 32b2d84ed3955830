import random

import pytest
from hypothesis import given, settings

from arcindex.diagram import from_dt, mirror, simplify
from arcindex.grid import Move, MoveKind, apply_move, to_planar
from arcindex.identify import match
from arcindex.invariants import fingerprint
from arcindex.representations import (
    _count_fixed,
    propagation_plan,
    psl27,
    psl27_count,
    wirtinger_relations,
)

from conftest import knot_grids, random_knot_grid
from oracles import count_homs_naive, psl27_order7_elements

# 12n_25 shares Jones, Alexander, determinant, signature and cover form with 6_2
KNOT_12N25 = (4, 8, 10, -14, 2, -20, -6, -24, -22, -12, -18, -16)


def test_group_structure():
    mul, inv, reps, sizes = psl27()
    assert mul.shape == (168, 168)
    assert all(mul[i, inv[i]] == 0 for i in range(168))
    assert list(sizes) == [24, 24]
    assert len(psl27_order7_elements()) == 48


@pytest.mark.parametrize("name,count", [
    ("3_1", 384), ("4_1", 720), ("5_1", 48), ("6_2", 384), ("8_19", 1056), ("10_132", 720),
])
def test_frozen_counts(table, name, count):
    assert psl27_count(table[name].diagram) == count


def test_small_knots_match_naive_count(table):
    cls = psl27_order7_elements()
    for name in ("3_1", "4_1", "5_1", "5_2", "6_1"):
        d = table[name].diagram
        assert psl27_count(d) == count_homs_naive(d, cls), name


def test_unknot_count():
    from arcindex.diagram import PlanarKnotDiagram

    assert psl27_count(PlanarKnotDiagram.unknot()) == 48


def test_separates_6_2_from_12n25(table):
    d = from_dt(KNOT_12N25)
    fp = fingerprint(d)
    six = table["6_2"].fp
    assert (fp.jones_norm, fp.alexander_norm, fp.det, fp.signature_abs, fp.cover_form) == (
        six.jones_norm, six.alexander_norm, six.det, six.signature_abs, six.cover_form)
    assert psl27_count(d) == 48 and six.psl27 == 384
    assert match(fp, table) != "6_2"


def test_plan_covers_every_relation(table):
    for e in table.entries[:60]:
        d = e.diagram
        rels = wirtinger_relations(d)
        seeds, starts, kinds, which = propagation_plan(rels, d.crossings)
        assert sorted(which) == list(range(d.crossings))
        assert starts[-1] == len(kinds) and len(seeds) <= d.crossings


def test_compiled_matches_python_body(table):
    py = getattr(_count_fixed, "py_func", _count_fixed)
    mul, inv, reps, _ = psl27()
    for name in ("3_1", "5_2", "8_19"):
        d = table[name].diagram
        rels = wirtinger_relations(d)
        plan = propagation_plan(rels, d.crossings)
        rep = int(reps[0])
        members = sorted({int(mul[mul[g, rep], inv[g]]) for g in range(168)})
        import numpy as np

        members = np.array(members, np.int64)
        args = (rels, d.crossings, *plan, mul, inv, members, rep)
        assert _count_fixed(*args) == py(*args)


@settings(max_examples=25)
@given(knot_grids(4, 7))
def test_naive_agreement_on_random_grids(g):
    d = simplify(to_planar(g))
    if d.crossings > 7:
        return
    assert psl27_count(d) == count_homs_naive(d, psl27_order7_elements())


@given(knot_grids(3, 8))
def test_invariant_under_moves_and_mirror(g):
    d = to_planar(g)
    n = psl27_count(d)
    assert n == psl27_count(simplify(d)) == psl27_count(mirror(d))
    for kind in (MoveKind.CycleRow, MoveKind.Rot90, MoveKind.FlipH):
        assert psl27_count(to_planar(apply_move(g, Move(kind)))) == n
