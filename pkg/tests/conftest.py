import pytest
from hypothesis import strategies as st

from cmtk import SimplicialComplex

_ACCEPTANCE: list[tuple[str, str, float]] = []


@st.composite
def complexes(draw, max_vertices=5, min_vertices=0):
    n = draw(st.integers(min_vertices, max_vertices))
    verts = list(range(1, n + 1))
    if not verts:
        return SimplicialComplex()
    facets = draw(st.lists(st.sets(st.sampled_from(verts), min_size=1), min_size=1, max_size=8))
    return SimplicialComplex(facets)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE.append((name, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, dur in _ACCEPTANCE:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({dur:.2f}s)")


@pytest.fixture(scope="session")
def fig3():
    from cmtk.flats import WeightedFiltration, lattice_of_flats_from_points
    from cmtk.generators import bundled
    from cmtk.io import points_from_json

    config, weights = points_from_json(bundled("paper_fig3"))
    lat = lattice_of_flats_from_points(config, "fig3")
    return config, lat, WeightedFiltration(lat, weights, 0, check_generic=False)
