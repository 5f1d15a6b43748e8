import pytest

from coopcolor.graphs import Graph, GraphFamily

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--long-budget", action="store_true", default=False,
                     help="run the t=4 non-colorability certification")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, msg = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {msg}")


@pytest.fixture
def long_budget(request):
    return request.config.getoption("--long-budget")


def path_graph(n):
    return Graph.build(range(n), ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves):
    return Graph.build(range(leaves + 1), ((0, i) for i in range(1, leaves + 1)))


def complete_graph(n):
    return Graph.build(range(n), ((i, j) for i in range(n) for j in range(i + 1, n)))


def k2_family(*edge_lists):
    return GraphFamily.common([0, 1], edge_lists)
