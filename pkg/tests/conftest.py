import os
import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from arcindex.grid import GridDiagram, component_count, validate  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.register_profile("thorough", max_examples=1000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def grid_from_perms(xs, os_) -> GridDiagram | None:
    """Grid with markings at rows xs[j] and os_[j] in column j, or None if not a knot."""
    n = len(xs)
    if any(a == b for a, b in zip(xs, os_)):
        return None
    g = GridDiagram(n, tuple(tuple(sorted(p)) for p in zip(xs, os_)))
    if not validate(g) or component_count(g) != 1:
        return None
    return g


def random_knot_grid(rng: random.Random, n_min: int = 2, n_max: int = 7) -> GridDiagram:
    while True:
        n = rng.randint(n_min, n_max)
        xs = list(range(n))
        os_ = list(range(n))
        rng.shuffle(xs)
        rng.shuffle(os_)
        g = grid_from_perms(xs, os_)
        if g is not None:
            return g


@st.composite
def knot_grids(draw, n_min: int = 2, n_max: int = 7):
    n = draw(st.integers(n_min, n_max))
    xs = draw(st.permutations(range(n)))
    os_ = draw(st.permutations(range(n)))
    g = grid_from_perms(xs, os_)
    from hypothesis import assume

    assume(g is not None)
    return g


@pytest.fixture(scope="session")
def table():
    from arcindex.identify import load_table

    return load_table()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for rec in results:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[rec["ok"]]
        terminalreporter.write_line(f"{status}  {rec['label']}  ({rec['detail']}; {rec['seconds']:.1f}s)")
