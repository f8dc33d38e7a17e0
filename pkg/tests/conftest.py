import re

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from quantgsp.graph_core import Graph, build_geometric_graph, laplacians

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def path3():
    w = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    return Graph(w)


@pytest.fixture
def small_graph():
    return build_geometric_graph(15, 2.0, 0.4, seed=3)


@pytest.fixture
def small_lap(small_graph):
    return laplacians(small_graph)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary; returns the verdict."""
    def _report(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        def key(s):
            return int(re.match(r"criterion (\d+)", s).group(1))
        for line in sorted(ACCEPTANCE_LINES, key=key):
            terminalreporter.write_line(line)
