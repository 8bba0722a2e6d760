import sys
import random

import pytest

from arbcolour.graph import DynGraph
from arbcolour.orientation import AcyclicProvider


def random_edges(n, m, seed):
    rng = random.Random(seed)
    edges = set()
    m = min(m, n * (n - 1) // 2)
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def random_graph(n, m, seed=0):
    return DynGraph.from_edges(n, random_edges(n, m, seed))


def complete_graph(k):
    return DynGraph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def churned(n, m, updates, seed=0, rebuild_period=None):
    """Graph plus provider after inserting ``m`` edges and random churn."""
    rng = random.Random(seed)
    g = DynGraph(n)
    prov = AcyclicProvider(g, rebuild_period=rebuild_period)
    while g.m < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.insert_edge(u, v)
    for _ in range(updates):
        u = rng.randrange(n)
        if rng.random() < 0.5 and g.adj[u]:
            g.delete_edge(u, rng.choice(sorted(g.adj[u])))
        else:
            v = rng.randrange(n)
            if u != v and not g.has_edge(u, v):
                g.insert_edge(u, v)
    return g, prov


def proper(g, colours):
    return all(colours[u] != colours[v] for u, v in g.edges())


@pytest.fixture
def k5():
    return complete_graph(5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.result_line(k))
