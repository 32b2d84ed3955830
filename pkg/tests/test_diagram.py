import pytest
from hypothesis import given

from arcindex.diagram import (
    DiagramError,
    PlanarKnotDiagram,
    canonical_dt,
    dt_code,
    format_dt,
    from_dt,
    is_alternating,
    is_prime_diagram,
    is_reduced,
    mirror,
    nugatory_crossings,
    parse_dt,
    simplify,
)
from arcindex.grid import GridDiagram, connected_sum, to_planar
from arcindex.invariants import fingerprint

from conftest import knot_grids
from oracles import min_dt

TREFOIL = from_dt((4, 6, 2))
TREFOIL5 = GridDiagram(5, ((1, 4), (0, 3), (2, 4), (1, 3), (0, 2)))
FIG6 = GridDiagram(6, ((0, 3), (2, 4), (1, 3), (2, 5), (0, 4), (1, 5)))


def kinked(d: PlanarKnotDiagram, at: int = 0, over: bool = True) -> PlanarKnotDiagram:
    """Insert a kink (new crossing visited twice in a row) before visit ``at``."""
    c = d.crossings
    visits = list(d.visits)
    visits[at:at] = [(c, over), (c, not over)]
    return PlanarKnotDiagram(tuple(visits), d.signs + (1,))


def test_dt_examples():
    assert dt_code(PlanarKnotDiagram.unknot()) == ()
    assert canonical_dt(TREFOIL) == min_dt(TREFOIL.visits)
    assert tuple(abs(v) for v in canonical_dt(TREFOIL)) == (4, 6, 2)
    assert dt_code(mirror(TREFOIL)) == tuple(-v for v in dt_code(TREFOIL))
    f8 = from_dt((4, 6, 8, 2))
    assert canonical_dt(mirror(f8)) == canonical_dt(f8)


def test_canonical_dt_sees_mirrors_only_off_alternating(table):
    # shifting the start by one visit negates an alternating code, so the
    # minimum over starts cannot tell an alternating diagram from its mirror
    assert canonical_dt(mirror(TREFOIL)) == canonical_dt(TREFOIL)
    for name in ("8_19", "8_20", "9_42", "10_132"):
        d = table[name].diagram
        assert canonical_dt(mirror(d)) != canonical_dt(d)


def test_from_dt_examples():
    assert from_dt(()).crossings == 0
    assert TREFOIL.crossings == 3
    assert fingerprint(TREFOIL) == fingerprint(to_planar(TREFOIL5))
    from_dt((6, 8, 10, 2, 4))
    with pytest.raises(DiagramError, match="not realizable"):
        from_dt((4, 6, 8, 10, 2))  # the 5_1 code rotated by one entry
    with pytest.raises(DiagramError):
        from_dt((4, 4, 2))


def test_parse_and_format():
    assert parse_dt("3 4 6 2") == (4, 6, 2)
    assert parse_dt("[4, 6, 2]".replace("[", "3 [")) == (4, 6, 2)
    assert format_dt((4, 6, 2)) == "3 4 6 2"
    with pytest.raises(DiagramError):
        parse_dt("4 4 6 2")
    with pytest.raises(DiagramError):
        parse_dt("")


def test_gauss_text_round_trip(table):
    for name in ("3_1", "8_19", "10_132"):
        d = table[name].diagram
        assert PlanarKnotDiagram.from_gauss_text(d.gauss_text()) == d
    assert PlanarKnotDiagram.from_gauss_text("-") == PlanarKnotDiagram.unknot()
    with pytest.raises(DiagramError):
        PlanarKnotDiagram.from_gauss_text("O1+ X2-")


def test_table_dt_codes_round_trip(table):
    for e in table.entries:
        code = canonical_dt(e.diagram)
        assert code == min_dt(e.diagram.visits)
        assert canonical_dt(from_dt(code)) == code


def test_invalid_gauss_rejected():
    with pytest.raises(DiagramError):
        PlanarKnotDiagram(((0, True), (0, True)), (1,))
    with pytest.raises(DiagramError):
        # over/under pattern of a trefoil with an impossible sign pattern
        PlanarKnotDiagram(((0, True), (1, False), (0, False), (1, True)), (1, 1))


def test_primality():
    assert is_prime_diagram(TREFOIL)
    s = to_planar(connected_sum(TREFOIL5, TREFOIL5))
    assert not is_prime_diagram(simplify(s))
    kink = PlanarKnotDiagram(((0, True), (0, False)), (1,))
    assert not is_prime_diagram(kink)


def test_reduced_alternating_mirror(table):
    assert is_reduced(TREFOIL) and is_alternating(TREFOIL)
    k = kinked(TREFOIL, 2)
    assert not is_reduced(k) and len(nugatory_crossings(k)) == 1
    assert not is_alternating(table["8_19"].diagram)
    assert mirror(mirror(TREFOIL)) == TREFOIL


def test_simplify_examples():
    u = PlanarKnotDiagram.unknot()
    for i in range(3):
        u = kinked(u, 0, over=bool(i % 2))
    assert u.crossings == 3 and simplify(u).crossings == 0
    raw = to_planar(FIG6)
    s = simplify(raw)
    assert s.crossings <= raw.crossings and fingerprint(s) == fingerprint(raw)
    assert simplify(TREFOIL) == TREFOIL
    assert simplify(kinked(TREFOIL, 1)).crossings == 3


def test_faces_count(table):
    for e in table.entries[:60]:
        assert len(e.diagram.faces()) == e.crossing_number + 2


@given(knot_grids())
def test_diagram_properties(g):
    d = to_planar(g)
    if d.crossings:
        assert len(d.faces()) == d.crossings + 2
    m = mirror(d)
    assert is_alternating(m) == is_alternating(d)
    if d.crossings:
        assert is_prime_diagram(m) == is_prime_diagram(d)
    s = simplify(d)
    assert s.crossings <= d.crossings
    assert fingerprint(s) == fingerprint(d) == fingerprint(mirror(mirror(d)))
    if d.crossings:
        assert canonical_dt(d) == min_dt(d.visits)
    if s.crossings:
        assert canonical_dt(from_dt(canonical_dt(s))) == canonical_dt(s)
