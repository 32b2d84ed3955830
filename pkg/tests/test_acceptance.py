"""Acceptance gate: one test per criterion, each printing a pass/fail line.

The summary lines are collected in ``RESULTS`` and printed by the terminal
summary hook in ``conftest.py``.  Set ``ARCINDEX_STRETCH=1`` to also run the
non-gating arc index 10 census (several hours).
"""

import os
import random
import time
from contextlib import contextmanager

import pytest

from arcindex import knotspoke as ks
from arcindex.cli import run
from arcindex.diagram import is_prime_diagram, is_reduced, simplify
from arcindex.grid import (
    GridDiagram,
    GridError,
    Move,
    MoveKind,
    apply_move,
    connected_sum,
    destabilizable,
    destabilize,
    reduce_grid,
    stabilize,
    to_planar,
)
from arcindex.identify import census
from arcindex.invariants import fingerprint, jones

from conftest import random_knot_grid
from oracles import brute_force_classes

RESULTS: list[dict] = []
WORKERS = max(1, min(4, os.cpu_count() or 1))

TREFOIL = GridDiagram(5, ((1, 4), (0, 3), (2, 4), (1, 3), (0, 2)))
FIGURE8 = GridDiagram(6, ((2, 5), (1, 3), (0, 2), (1, 4), (3, 5), (0, 4)))


@contextmanager
def criterion(label: str):
    rec = {"label": label, "ok": False, "detail": ""}
    RESULTS.append(rec)
    t0 = time.time()
    try:
        yield rec
        rec["ok"] = True
    finally:
        rec["seconds"] = time.time() - t0


@pytest.fixture(scope="module")
def census9(table):
    t0 = time.time()
    rep = census(9, table, WORKERS)
    rep.seconds = time.time() - t0
    return rep


def read_tsv(text: str) -> dict:
    cells = {}
    for line in text.splitlines()[1:]:
        a, c, count, names = (line.split("\t") + [""])[:4]
        cells[(int(a), c)] = int(count)
    return cells


def test_c1_census_up_to_8(tmp_path):
    with criterion("C1 census alpha<=8: subtotals 1,1,3,8 and crossing splits") as rec:
        out = tmp_path / "census8.tsv"
        assert run(["census", "--n-max", "8", "--workers", str(WORKERS), "--out", str(out)]) == 0
        cells = read_tsv(out.read_text())
        subtotals = [cells[(a, "subtotal")] for a in range(5, 9)]
        rec["detail"] = f"subtotals {subtotals}"
        assert subtotals == [1, 1, 3, 8]
        split7 = {int(c): v for (a, c), v in cells.items() if a == 7 and c.isdigit()}
        split8 = {int(c): v for (a, c), v in cells.items() if a == 8 and c.isdigit()}
        rec["detail"] += f", alpha=7 {split7}, alpha=8 {split8}"
        assert split7 == {5: 2, 8: 1}
        assert split8 == {6: 3, 8: 2, 9: 2, 10: 1}
        assert not any(c == "unidentified" for _, c in cells)


def test_c2_census_9(census9, table):
    with criterion("C2 census alpha=9: subtotal 29, cells 7:7 9:6 10:9, 7 unidentified") as rec:
        rep = census9
        ident = rep.identified(9)
        un = rep.unidentified(9)
        rec["detail"] = (f"subtotal {rep.subtotal(9)}, identified {ident}, unidentified {len(un)}, "
                         f"census 5..9 took {rep.seconds:.1f}s")
        assert rep.subtotal(9) == 29
        assert ident == {7: 7, 9: 6, 10: 9}
        assert len(un) == 7
        # arc index c + 2 for alternating knots, at most c otherwise
        for k in rep.classes:
            if k.crossing_number is None:
                continue
            if table[k.label].alternating:
                assert k.arc_index == k.crossing_number + 2, k.label
            else:
                assert k.arc_index <= k.crossing_number, k.label


def test_c3_census_10(table):
    label = "C3 (stretch) census alpha=10: subtotal 240"
    if os.environ.get("ARCINDEX_STRETCH") != "1":
        RESULTS.append({"label": label, "ok": None, "detail": "non-gating, set ARCINDEX_STRETCH=1",
                        "seconds": 0.0})
        pytest.skip("non-gating stretch goal; set ARCINDEX_STRETCH=1")
    with criterion(label) as rec:
        rep = census(10, table, WORKERS)
        rec["detail"] = f"subtotal {rep.subtotal(10)}"
        assert rep.subtotal(10) == 240


def _mirror(g: GridDiagram) -> GridDiagram:
    return apply_move(g, Move(MoveKind.FlipH))


def test_c4_connected_sums():
    with criterion("C4 connected sums keep alpha1+alpha2-2 arcs, Jones multiplicative") as rec:
        cases = [
            ("3_1#3_1", TREFOIL, TREFOIL),
            ("3_1#mirror(3_1)", TREFOIL, _mirror(TREFOIL)),
            ("3_1#4_1", TREFOIL, FIGURE8),
        ]
        sizes = []
        for name, g1, g2 in cases:
            g = connected_sum(g1, g2)
            bound = g1.n + g2.n - 2
            small = reduce_grid(g, 20_000)
            sizes.append(f"{name} {g.n}->{small.n}")
            assert small.n >= bound, name
            assert jones(to_planar(g)) == jones(to_planar(g1)) * jones(to_planar(g2)), name
            assert jones(to_planar(small)) == jones(to_planar(g)), name
        rec["detail"] = ", ".join(sizes)


def test_c5_wheels_for_table(table):
    with criterion("C5 to_wheel gives c+2 spokes and the same fingerprint on all 249 table knots") as rec:
        assert len(table) == 249
        for e in table.entries:
            d = simplify(e.diagram)
            assert d.crossings == e.crossing_number and is_reduced(d) and is_prime_diagram(d), e.name
            w, trace = ks.to_wheel(d)
            assert w.size == d.crossings + 2, e.name
            assert fingerprint(to_planar(ks.wheel_to_grid(w))) == e.fp, e.name
            ks.verify_trace(trace, check_fingerprint=False)
        rec["detail"] = "249 knots"


def test_c6_nonalternating_table(table):
    with criterion("C6 reduce_nonalternating gives <= c spokes on the 11 non-alternating knots c<=9") as rec:
        names = [e.name for e in table.entries if not e.alternating and e.crossing_number <= 9]
        assert sum(table[n].crossing_number == 8 for n in names) == 3
        assert sum(table[n].crossing_number == 9 for n in names) == 8
        got = []
        for name in names:
            e = table[name]
            w, trace = ks.reduce_nonalternating(simplify(e.diagram))
            got.append(f"{name}:{w.size}")
            assert w.size <= e.crossing_number, name
            assert fingerprint(to_planar(ks.wheel_to_grid(w))) == e.fp, name
            ks.verify_trace(trace)
        rec["detail"] = " ".join(got)


def _random_move(rng: random.Random, g: GridDiagram) -> GridDiagram:
    """A random M1-M4 move, stabilization or destabilization of ``g``."""
    while True:
        pick = rng.randrange(4)
        if pick == 0:
            return apply_move(g, Move(rng.choice(list(MoveKind)[:7])))
        if pick == 1:
            kind = rng.choice((MoveKind.SwapRows, MoveKind.SwapCols))
            try:
                return apply_move(g, Move(kind, rng.randrange(g.n - 1)))
            except GridError:
                continue
        if pick == 2:
            return stabilize(g, rng.randrange(g.n), rng.randrange(g.n + 1))
        pos = destabilizable(g)
        if pos is not None and g.n > 2:
            return destabilize(g, pos)


def test_c7_invariant_suites():
    with criterion("C7 invariant suites over 10^4 random grids n<=7, zero violations") as rec:
        rng = random.Random(2024)
        grids = moves = steps = witnesses = knotted = 0
        while grids < 10_000:
            g = random_knot_grid(rng, 4, 7)
            grids += 1
            raw = to_planar(g)
            if raw.crossings:
                assert len(raw.faces()) == raw.crossings + 2
            d = simplify(raw)
            fp = fingerprint(d)
            h = g
            for _ in range(3):
                h = _random_move(rng, h)
                moves += 1
                assert fingerprint(to_planar(h)) == fp
            if not d.crossings:
                continue
            assert len(d.faces()) == d.crossings + 2
            if not is_prime_diagram(d):
                continue
            knotted += 1
            for v0 in range(d.crossings):
                D = ks.from_planar(d, v0)
                sr = D.spokes_plus_regions
                assert sr == d.crossings + 2
                while D.crossings:
                    assert ks.cut_point(D) is None
                    found = ks.admissible_edges(D)
                    assert len(found) >= 2
                    witnesses += 1
                    D = ks.contract(D, rng.choice(found))
                    steps += 1
                    assert D.spokes_plus_regions == sr
                assert ks.split_loop(D).spoke_count == sr
        rec["detail"] = (f"{grids} grids, {moves} moves, {knotted} prime knotted diagrams, "
                         f"{steps} contractions, {witnesses} two-witness checks")


def test_c8_oracle_equivalence(census9):
    with criterion("C8 pruned and brute-force knot classes agree for n=5,6") as rec:
        brute = brute_force_classes(6)
        pruned = {k.fp: k.arc_index for k in census9.classes if k.arc_index <= 6}
        rec["detail"] = f"{len(brute)} classes"
        assert pruned == brute
