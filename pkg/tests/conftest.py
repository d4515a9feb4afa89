import pytest

from meshqos.topology import RouteQuery, from_positions, generate_connected_topology

AREA = (20.0, 20.0)


def graph(positions, radius, delays=None, bandwidths=None):
    n = len(positions)
    return from_positions(positions, delays or [1.0] * n, bandwidths or [1.0] * n, AREA, radius)


@pytest.fixture
def chain():
    # 1 - 2 - 3
    return graph([(0, 0), (1, 0), (2, 0)], 1.0)


@pytest.fixture
def triangle():
    return graph([(0, 0), (1, 0), (0.5, 0.8)], 1.0)


@pytest.fixture
def diamond():
    # 1-2, 1-3, 2-4, 3-4; no 1-4, no 2-3
    return graph([(0, 1), (1, 2), (1, 0), (2, 1)], 1.5)


@pytest.fixture
def k4():
    return graph([(0, 0), (1, 0), (0, 1), (1, 1)], 2.0)


def small_instance(k, nodes=10, radius=450.0):
    """The k-th oracle-scale instance used across tests: 10 nodes on
    1000 x 1000 m with a 450 m radius, regenerated until 1 and 10 connect."""
    q = RouteQuery(1, nodes)
    topo, _ = generate_connected_topology(q, node_count=nodes, coverage_radius=radius,
                                          seed=1000 * k)
    return topo, q


# -- acceptance reporting ----------------------------------------------------

_RESULTS = []


@pytest.fixture
def criterion():
    def record(number, name, passed, detail=""):
        _RESULTS.append((number, name, passed, detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {name}: {detail}")
