import re

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rrspectral.graph import build_graph, is_connected

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=2, max_n=12, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [pr for pr, b in zip(pairs, bits) if b]
    if connected:
        # a random spanning path keeps the graph connected
        perm = draw(st.permutations(range(n)))
        edges += [(perm[k], perm[k + 1]) for k in range(n - 1)]
    return build_graph(n, edges)


@st.composite
def graph_and_cut(draw, min_n=2, max_n=12, connected=False):
    G = draw(graphs(min_n, max_n, connected))
    size = draw(st.integers(1, G.n - 1))
    members = draw(st.permutations(range(G.n)))[:size]
    return G, sorted(members)


def random_connected_graph(rng, n, p):
    while True:
        upper = np.triu(rng.random((n, n)) < p, 1)
        G = build_graph(n, np.argwhere(upper))
        if is_connected(G):
            return G


# ---- acceptance summary: one PASS/FAIL line per criterion

_CRITERIA = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _CRITERIA[key] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' ')}: {status}")
