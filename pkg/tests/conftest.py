"""Shared fixtures and independent reference implementations.

The references deliberately avoid the package's own code paths: modularity
comes from networkx and partitions from sympy.
"""

from __future__ import annotations

import math
import random

import networkx as nx
import pytest
from hypothesis import strategies as st
from sympy.utilities.iterables import multiset_partitions

from modclust.generators import random_graph, two_triangles
from modclust.graph import Graph


def to_networkx(graph: Graph) -> nx.Graph:
    """networkx counts a self-loop twice in degrees; halve it to match our convention."""
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    for u, v, w in graph.edges():
        g.add_edge(u, v, weight=w / 2 if u == v else w)
    return g


def reference_modularity(graph: Graph, assignment) -> float:
    groups: dict[int, set[int]] = {}
    for v, c in enumerate(assignment):
        groups.setdefault(c, set()).add(v)
    return nx.community.modularity(to_networkx(graph), groups.values(), weight="weight")


def reference_max_modularity(graph: Graph) -> float:
    best = -math.inf
    for partition in multiset_partitions(list(range(graph.n))):
        assignment = [0] * graph.n
        for k, block in enumerate(partition):
            for v in block:
                assignment[v] = k
        best = max(best, reference_modularity(graph, assignment))
    return best


def nonempty_random_graph(n: int, p: float, seed: int, weights: str = "mixed") -> Graph:
    """Random graph guaranteed to have positive total weight."""
    rng = random.Random(seed)
    while True:
        g = random_graph(n, p, rng.randrange(2**32), weights)
        if g.total_weight > 0:
            return g


@st.composite
def small_graphs(draw, min_n: int = 2, max_n: int = 9, weights: str = "mixed") -> Graph:
    n = draw(st.integers(min_n, max_n))
    p = draw(st.sampled_from([0.3, 0.5, 0.8]))
    seed = draw(st.integers(0, 2**32 - 1))
    return nonempty_random_graph(n, p, seed, weights)


@pytest.fixture
def bridge_graph() -> Graph:
    return two_triangles()


# --- acceptance reporting -------------------------------------------------
# Tests marked ``criterion(number, title)`` are grouped; the terminal summary
# prints one PASS/FAIL line per criterion, with any details the tests noted.

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed or report.skipped):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "details": []})
    if not report.passed:
        entry["passed"] = False
    details = [text for key, text in item.user_properties if key == "detail"]
    if report.failed and report.longrepr is not None:
        message = getattr(report.longrepr, "reprcrash", None)
        details.append(f"{item.name}: {message.message.splitlines()[0] if message else 'failed'}")
    entry["details"].extend(d for d in details if d not in entry["details"])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}")
        for detail in entry["details"]:
            terminalreporter.write_line(f"    {detail}")


@pytest.fixture
def note(request):
    """Attach a detail line to the acceptance summary for this test."""

    def add(text: str) -> None:
        request.node.user_properties.append(("detail", text))

    return add
