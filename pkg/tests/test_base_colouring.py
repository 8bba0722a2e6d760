from hypothesis import given, settings
from hypothesis import strategies as st

from arbcolour.base_colouring import BaseColouring
from arbcolour.graph import DynGraph
from arbcolour.orientation import AcyclicProvider, rebuild_acyclic

from conftest import churned, random_graph


def test_chain_parity():
    # peel order 2,1,0 would give labels; build a chain a->b->c with c the root
    g = DynGraph.from_edges(3, [(0, 1), (1, 2)])
    o = rebuild_acyclic(g)
    bc = BaseColouring(o)
    roots = [v for v in range(3) if not o.out[v]]
    assert len(roots) == 1
    c = roots[0]
    b = next(v for v in range(3) if c in o.out[v])
    a = next(v for v in range(3) if b in o.out[v])
    assert [bc.parity(x, 0) for x in (c, b, a)] == [0, 1, 0]


def test_isolated_vertex():
    g = DynGraph.from_edges(4, [(0, 1)])
    bc = BaseColouring(rebuild_acyclic(g))
    col = bc.base_colour(3)
    assert col.value == 0 and set(col.bits) <= {0}


def test_random_graph_proper():
    g = random_graph(100, 300, seed=2)
    o = rebuild_acyclic(g)
    bc = BaseColouring(o)
    vals = [bc.value(v) for v in range(100)]
    assert all(vals[u] != vals[w] for u, w in g.edges())
    assert max(vals) < 2**o.dmax
    assert bc.all_values() == vals


def test_edge_differs_in_its_slot():
    g, prov = churned(200, 600, 500, seed=4)
    o = prov.orientation
    bc = BaseColouring(o)
    for u in range(o.n):
        for w, s in o.out[u].items():
            assert bc.parity(u, s) != bc.parity(w, s)


def test_memo_invalidated_by_updates():
    g = DynGraph(3)
    prov = AcyclicProvider(g, rebuild_period=10**6)
    bc = BaseColouring(prov.orientation)
    assert bc.value(0) == 0
    g.insert_edge(0, 1)
    assert bc.value(0) != bc.value(1)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 30), st.lists(st.tuples(st.integers(0, 29), st.integers(0, 29)), max_size=120))
def test_propriety_property(n, pairs):
    g = DynGraph(n)
    prov = AcyclicProvider(g)
    for u, v in pairs:
        u, v = u % n, v % n
        if u != v and not g.has_edge(u, v):
            g.insert_edge(u, v)
    bc = BaseColouring(prov.orientation)
    vals = [bc.value(v) for v in range(n)]
    assert all(vals[u] != vals[w] for u, w in g.edges())
    assert vals == [bc.value(v) for v in range(n)]
    assert all(x < 2 ** prov.orientation.dmax for x in vals)
