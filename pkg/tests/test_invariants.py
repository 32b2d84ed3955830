import numpy as np
import pytest
from hypothesis import given

from arcindex.diagram import PlanarKnotDiagram, from_dt, mirror
from arcindex.grid import GridDiagram, connected_sum, to_planar
from arcindex.invariants import (
    BudgetExceeded,
    Fingerprint,
    alexander,
    bracket_state_sum,
    cover_linking_form,
    determinant,
    fingerprint,
    goeritz_matrix,
    jones,
    kauffman_bracket,
    signature,
)
from arcindex.laurent import LaurentPolynomial as L

from conftest import knot_grids

TREFOIL5 = GridDiagram(5, ((1, 4), (0, 3), (2, 4), (1, 3), (0, 2)))
FIGURE8 = GridDiagram(6, ((2, 5), (1, 3), (0, 2), (1, 4), (3, 5), (0, 4)))

# Standard published values (one chirality each), frozen.
JONES = {
    "3_1": "1:1 1:3 -1:4",
    "4_1": "1:-2 -1:-1 1:0 -1:1 1:2",
    "5_1": "1:2 1:4 -1:5 1:6 -1:7",
    "5_2": "1:1 -1:2 2:3 -1:4 1:5 -1:6",
    "8_19": "1:3 1:5 -1:8",
}
ALEXANDER = {
    "3_1": "1:-1 -1:0 1:1",
    "4_1": "1:-1 -3:0 1:1",  # positive leading coefficient
    "5_1": "1:-2 -1:-1 1:0 -1:1 1:2",
    "5_2": "2:-1 -3:0 2:1",
    "8_19": "1:-3 -1:-2 1:0 -1:2 1:3",
}
SIGNATURE = {"3_1": 2, "4_1": 0, "5_1": 4, "5_2": 2, "8_19": 6}


def kink(sign: int) -> PlanarKnotDiagram:
    # a single curl; its sign and over/under order are tied by planarity
    for over in (True, False):
        try:
            return PlanarKnotDiagram(((0, over), (0, not over)), (sign,))
        except ValueError:
            continue
    raise AssertionError


def test_bracket_examples():
    assert kauffman_bracket(PlanarKnotDiagram.unknot()) == L.one()
    k = kink(1)
    b = kauffman_bracket(k)
    assert b in (L({3: -1}), L({-3: -1}))
    # writhe normalization kills the kink
    assert jones(k) == L.one()
    assert b == bracket_state_sum(k)


@pytest.mark.parametrize("name", sorted(JONES))
def test_frozen_values(table, name):
    d = table[name].diagram
    j = jones(d)
    want = L.parse(JONES[name])
    assert j in (want, want.substitute_inverse())
    assert alexander(d) == L.parse(ALEXANDER[name])
    assert determinant(d) == abs(L.parse(ALEXANDER[name])(-1))
    assert abs(signature(d)) == SIGNATURE[name]


def test_trefoil_and_figure_eight():
    t = to_planar(TREFOIL5)
    assert alexander(t) == L.parse("1:-1 -1:0 1:1") and determinant(t) == 3
    fp = fingerprint(t)
    assert fp == fingerprint(mirror(t)) and fp.chiral_flag
    assert not fingerprint(to_planar(FIGURE8)).chiral_flag
    u = fingerprint(PlanarKnotDiagram.unknot())
    assert u.is_unknot() and u.det == 1 and not u.chiral_flag
    assert jones(PlanarKnotDiagram.unknot()) == L.one()


def test_connected_sum_multiplicativity():
    s = to_planar(connected_sum(TREFOIL5, FIGURE8))
    t, f = to_planar(TREFOIL5), to_planar(FIGURE8)
    assert jones(s) == jones(t) * jones(f)
    assert alexander(s) == alexander(t) * alexander(f)
    tt = to_planar(connected_sum(TREFOIL5, TREFOIL5))
    assert jones(tt) == jones(t) ** 2


def test_table_sanity(table):
    for e in table.entries:
        d = e.diagram
        a = alexander(d)
        assert a(1) in (1, -1)
        assert e.fp.det == abs(a(-1))
        # Goeritz route to the determinant, independent of the Fox matrix
        g, _ = goeritz_matrix(d)
        assert e.fp.det == (abs(round(np.linalg.det(np.array(g, dtype=float)))) if g else 1)
        assert jones(d)(1) == 1
        assert signature(d) % 2 == 0
        assert e.fp == Fingerprint.parse(e.fp.serialize())


def test_state_sum_budget():
    d = from_dt((4, 6, 2))
    with pytest.raises(BudgetExceeded):
        bracket_state_sum(d, max_crossings=2)


def test_mirror_flips_jones(table):
    for name in ("3_1", "5_2", "8_19", "9_42"):
        d = table[name].diagram
        assert jones(mirror(d)) == jones(d).substitute_inverse()
        assert signature(mirror(d)) == -signature(d)
        assert cover_linking_form(mirror(d)) == cover_linking_form(d)


@given(knot_grids(2, 6))
def test_bracket_matches_state_sum(g):
    d = to_planar(g)
    if d.crossings <= 12:
        assert kauffman_bracket(d) == bracket_state_sum(d)


@given(knot_grids())
def test_fingerprint_mirror_invariant(g):
    d = to_planar(g)
    fp = fingerprint(d)
    assert fp == fingerprint(mirror(d))
    assert fp.det == abs(fp.alexander_norm(-1))
    assert fp.chiral_flag == (jones(d) != jones(d).substitute_inverse())
