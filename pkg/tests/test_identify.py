import pytest

from arcindex.grid import GridDiagram, to_planar
from arcindex.identify import (
    ClassRegistry,
    KnotTable,
    TableCollision,
    UnidentifiedClass,
    census,
    load_table,
    match,
    tabulate,
)
from arcindex.invariants import fingerprint
from arcindex.diagram import PlanarKnotDiagram, from_dt

TREFOIL5 = GridDiagram(5, ((1, 4), (0, 3), (2, 4), (1, 3), (0, 2)))


def test_table_contents(table):
    assert len(table) == 249
    counts = {}
    for e in table.entries:
        counts[e.crossing_number] = counts.get(e.crossing_number, 0) + 1
    assert counts == {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 21, 9: 49, 10: 165}
    t = table["3_1"]
    assert t.crossing_number == 3 and t.alternating
    nonalt10 = [e.name for e in table.entries if e.crossing_number == 10 and not e.alternating]
    assert nonalt10 == [f"10_{k}" for k in range(124, 166)]
    assert "10_124" in table and "11_1" not in table
    with pytest.raises(KeyError):
        table["11_1"]


def test_collision_detected(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("# two names for one knot\n3_1 3 A 4 6 2\nmy_trefoil 3 A 4 6 2\n")
    with pytest.raises(TableCollision, match="3_1 and my_trefoil"):
        load_table(p)


def test_bad_rows_rejected(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("3_1 3 N 4 6 2\n")
    with pytest.raises(ValueError, match="alternating flag"):
        load_table(p)
    p.write_text("3_1 4 A 4 6 2\n")
    with pytest.raises(ValueError, match="length"):
        load_table(p)


def test_match(table):
    assert match(fingerprint(to_planar(TREFOIL5)), table) == "3_1"
    assert match(fingerprint(PlanarKnotDiagram.unknot()), table) == "unknot"
    reg = ClassRegistry()
    fp = fingerprint(from_dt((4, 6, 2)))
    assert match(fp, KnotTable.empty(), reg) == UnidentifiedClass(1)
    other = fingerprint(from_dt((4, 6, 8, 2)))
    assert match(other, KnotTable.empty(), reg) == UnidentifiedClass(2)
    assert match(fp, KnotTable.empty(), reg) == UnidentifiedClass(1)
    assert str(UnidentifiedClass(2)) == "U2"


def test_tabulate_empty(table):
    r = tabulate([], table)
    assert r.classes == [] and r.arc_indices == []
    assert r.subtotal(5) == 0 and r.identified(9) == {}


def test_small_census(table):
    r = census(7, table)
    assert [r.subtotal(a) for a in (5, 6, 7)] == [1, 1, 3]
    assert r.names(5) == ["3_1"] and r.names(6) == ["4_1"]
    assert r.identified(7) == {5: 2, 8: 1}
    assert sorted(r.names(7)) == ["5_1", "5_2", "8_19"]
    tsv = r.to_tsv().splitlines()
    assert tsv[0] == "arc_index\tcrossings\tcount\tknots"
    assert "7\tsubtotal\t3\t" in tsv
    text = r.to_text()
    assert text.splitlines()[-1].split() == ["subtotal", "1", "1", "3"]


def test_census_with_empty_table():
    r = census(5, KnotTable.empty())
    assert r.identified(5) == {}
    assert [k.label for k in r.unidentified(5)] == ["U1"]


def test_census_worker_determinism(table):
    a = census(8, table, workers=1).to_tsv()
    b = census(8, table, workers=3).to_tsv()
    assert a == b
