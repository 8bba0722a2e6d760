import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arbcolour.engines.rand_simple import (
    FAILED,
    RandSimpleColouring,
    SimpleCore,
    experiment_sizes,
    simple_batch,
    simple_palette_bound,
)
from arbcolour.graph import DynGraph, VertexOutOfRange
from arbcolour.orientation import AcyclicProvider, rebuild_acyclic

from conftest import churned, complete_graph, proper, random_graph


def test_sizes():
    assert experiment_sizes(8) == (12, 192)
    assert experiment_sizes(1) == experiment_sizes(2) == (4, 16)
    assert simple_palette_bound(8) == 192 + 25


def test_isolated_vertex_never_fails():
    g = random_graph(300, 1500, seed=1)
    g2 = DynGraph.from_edges(301, g.edges())
    o = rebuild_acyclic(g2)
    assert o.dmax > 4
    eng = RandSimpleColouring(o, seed=5)
    k = eng.propose_colour(300)
    assert k != FAILED and k == min(eng.core.proposals(300))


def test_failure_rate_d16():
    d, trials = 16, 10_000
    n = trials * (d + 1)
    src = np.repeat(np.arange(trials), d)
    dst = trials + np.arange(trials * d)
    out = [list(range(trials + v * d, trials + (v + 1) * d)) for v in range(trials)] + [[] for _ in range(trials * d)]
    topo = list(range(trials, n)) + list(range(trials))
    _, failed = simple_batch(n, src, dst, out, topo, d, seed=42, epoch=0)
    rate = failed[:trials].mean()
    p = d**-4
    sigma = math.sqrt(p * (1 - p) / trials)
    assert rate <= p + 3 * sigma
    assert not failed[trials:].any()


def test_label_blocks():
    g, prov = churned(2000, 10_000, 0, seed=3)
    o = prov.orientation
    eng = RandSimpleColouring(o, seed=9)
    M = experiment_sizes(o.dmax)[1]
    for v in range(2000):
        lab = eng.label(v)
        if lab.residual:
            assert M <= lab.value < M + 3 * o.dmax + 1
        else:
            assert lab.value < M
    cols = [eng.colour(v) for v in range(2000)]
    assert proper(g, cols)
    assert max(cols) < eng.palette_bound()


def test_residual_chain_and_sink():
    # dmax <= 4 means every vertex takes the residual path
    g = DynGraph.from_edges(3, [(0, 1), (1, 2)])
    o = rebuild_acyclic(g)
    eng = RandSimpleColouring(o)
    assert all(eng.propose_colour(v) == FAILED for v in range(3))
    c = next(v for v in range(3) if not o.out[v])
    b = next(v for v in range(3) if c in o.out[v])
    a = next(v for v in range(3) if b in o.out[v])
    assert [eng.colour_residual(x) for x in (c, b, a)] == [0, 1, 0]
    assert eng.residual_component(a) == {a, b, c}


def test_failed_clique():
    g = complete_graph(5)
    o = rebuild_acyclic(g)
    eng = RandSimpleColouring(o, seed=3)
    res = [eng.colour_residual(v) for v in range(5)]
    assert sorted(res) == list(range(5))
    assert max(res) <= o.dmax


def test_query_order_independence():
    g, prov = churned(1500, 9000, 2000, seed=6)
    o = prov.orientation
    orders = [list(range(1500)), list(range(1499, -1, -1)), random.Random(1).sample(range(1500), 1500)]
    vecs = []
    for order in orders:
        eng = RandSimpleColouring(o, seed=4)
        cols = [0] * 1500
        for v in order:
            cols[v] = eng.colour(v)
        vecs.append(cols)
    assert vecs[0] == vecs[1] == vecs[2]
    assert RandSimpleColouring(o, seed=4).colour_all().tolist() == vecs[0]


def test_epoch_resamples():
    g, prov = churned(400, 2400, 0, seed=2)
    eng = RandSimpleColouring(prov.orientation, seed=1)
    eng.colour(0)
    before = eng.core.proposals(0)
    g.insert_edge(*next((u, v) for u in range(400) for v in range(u + 1, 400) if not g.has_edge(u, v)))
    eng.colour(0)
    assert eng.core.proposals(0) != before


def test_out_of_range():
    eng = RandSimpleColouring(rebuild_acyclic(DynGraph(3)))
    with pytest.raises(VertexOutOfRange):
        eng.colour(3)


def test_core_over_custom_out_function():
    out = {0: [1, 2], 1: [2], 2: []}
    core = SimpleCore(out.__getitem__, 8, seed=1, epoch=0)
    vals = [core.value(v) for v in range(3)]
    assert len(set(vals)) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 400), st.integers(0, 2**32))
def test_property_palette_and_batch(n, m, seed):
    g = random_graph(n, m, seed=seed)
    o = rebuild_acyclic(g)
    eng = RandSimpleColouring(o, seed=seed)
    cols = [eng.colour(v) for v in range(n)]
    assert proper(g, cols)
    dd = max(o.dmax, 2)
    assert max(cols) < 8 * dd * math.ceil(math.log2(dd)) + 3 * o.dmax + 1
    assert eng.colour_all().tolist() == cols
