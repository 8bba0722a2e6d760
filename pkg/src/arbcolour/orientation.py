"""Bounded out-degree orientations.

:class:`AcyclicProvider` orients each inserted edge from the endpoint with
the larger order label to the smaller one, and falls back to a full
degeneracy peel when an out-degree exceeds ``cap_factor * (alpha_hat + 1)``
or when too many updates have accumulated since the last peel.

:class:`FlipProvider` keeps the same cap by flipping edges instead: an
overfull vertex hands every out-edge to the other endpoint, and the cascade
continues until no vertex is over the cap.  Its orientations need not be
acyclic, so the colouring engines refuse them.
"""
from __future__ import annotations

import heapq
from typing import Optional, Protocol, Sequence

import numpy as np

from .graph import DynGraph, UpdateReceipt, VertexOutOfRange


class AdjacencyLike(Protocol):
    n: int
    adj: Sequence[set]


def peel_order(n: int, adj: Sequence[set]) -> tuple[int, list[int]]:
    """Repeatedly remove a minimum-degree vertex (smallest id on ties).

    Returns ``(degeneracy, removal_order)``.
    """
    deg = [len(a) for a in adj]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    order: list[int] = []
    degeneracy = 0
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        d, v = pop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        if d > degeneracy:
            degeneracy = d
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                push(heap, (deg[w], w))
    return degeneracy, order


def alpha_from_degeneracy(degeneracy: int) -> int:
    # alpha <= degeneracy <= 2 alpha - 1
    return max(1, (degeneracy + 2) // 2)


def out_degree_cap(alpha_hat: int, factor: int = 2) -> int:
    return factor * (alpha_hat + 1)


class Orientation:
    """Out-lists with per-edge slot indices and an order label per vertex.

    ``out[v]`` maps out-neighbour -> slot, ``parent[v]`` maps slot ->
    out-neighbour.  Every out-edge ``u -> w`` satisfies
    ``label[u] > label[w]``.  ``dmax`` is the number of slot forests in use,
    which bounds every out-degree.
    """

    def __init__(self, n: int):
        self.n = n
        self.out: list[dict[int, int]] = [{} for _ in range(n)]
        self.parent: list[dict[int, int]] = [{} for _ in range(n)]
        self.label: list[int] = list(range(n - 1, -1, -1))
        self.dmax = 0
        self.degeneracy = 0
        self.alpha_hat = 1
        self.acyclic = True
        self.epoch = 0
        self.version = 0
        self._arrays: Optional[tuple[int, np.ndarray, np.ndarray]] = None
        self._topo: Optional[tuple[int, list[int]]] = None
        self._label_gen = 0

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {self.n})")

    def out_neighbours(self, v: int) -> list[tuple[int, int]]:
        self._check(v)
        return list(self.out[v].items())

    def out_degree(self, v: int) -> int:
        return len(self.out[v])

    def max_out_degree(self) -> int:
        return max((len(o) for o in self.out), default=0)

    @property
    def m(self) -> int:
        return sum(len(o) for o in self.out)

    def edges(self):
        for u, o in enumerate(self.out):
            for w in o:
                yield u, w

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Directed edges as ``(src, dst)`` arrays grouped by ascending src."""
        if self._arrays is None or self._arrays[0] != self.version:
            src = np.fromiter(
                (u for u, o in enumerate(self.out) for _ in o), dtype=np.int64
            )
            dst = np.fromiter(
                (w for o in self.out for w in o), dtype=np.int64, count=len(src)
            )
            self._arrays = (self.version, src, dst)
        return self._arrays[1], self._arrays[2]

    def topological_order(self) -> list[int]:
        """Vertices by ascending label: every vertex after its out-neighbours."""
        if self._topo is None or self._topo[0] != self._label_gen:
            order = [0] * self.n
            for v, lab in enumerate(self.label):
                order[lab] = v
            self._topo = (self._label_gen, order)
        return self._topo[1]

    def _add(self, u: int, w: int) -> int:
        slots = self.parent[u]
        s = 0
        while s in slots:
            s += 1
        slots[s] = w
        self.out[u][w] = s
        if s + 1 > self.dmax:
            self.dmax = s + 1
        return s

    def _remove(self, u: int, w: int) -> None:
        s = self.out[u].pop(w)
        del self.parent[u][s]

    def owner(self, u: int, w: int) -> Optional[int]:
        if w in self.out[u]:
            return u
        if u in self.out[w]:
            return w
        return None

    def copy_from(self, other: "Orientation") -> None:
        self.n = other.n
        self.out = other.out
        self.parent = other.parent
        self.label = other.label
        self.dmax = other.dmax
        self.degeneracy = other.degeneracy
        self.alpha_hat = other.alpha_hat
        self.acyclic = other.acyclic
        self._label_gen += 1
        self.version += 1

    def check_invariants(self, cap_factor: Optional[int] = 2) -> None:
        for u in range(self.n):
            slots = self.parent[u]
            assert len(slots) == len(self.out[u])
            for w, s in self.out[u].items():
                assert slots[s] == w
                assert 0 <= s < self.dmax
                if self.acyclic:
                    assert self.label[u] > self.label[w], f"{u}->{w} violates order"
                assert u not in self.out[w], f"edge {u}-{w} owned twice"
        if cap_factor is not None:
            assert self.dmax <= out_degree_cap(self.alpha_hat, cap_factor)


def rebuild_acyclic(g: AdjacencyLike, epoch: int = 0) -> Orientation:
    """Peel ``g`` and orient every edge from the earlier-peeled endpoint.

    The resulting out-degree of each vertex is at most the degeneracy, labels
    are the reversed peel order, and ``alpha_hat`` is refreshed.
    """
    n = g.n
    degeneracy, order = peel_order(n, g.adj)
    o = Orientation(n)
    label = o.label
    for i, v in enumerate(order):
        label[v] = n - 1 - i
    done = [False] * n
    dmax = 0
    for v in order:
        done[v] = True
        targets = sorted(w for w in g.adj[v] if not done[w])
        o.out[v] = {w: s for s, w in enumerate(targets)}
        o.parent[v] = dict(enumerate(targets))
        if len(targets) > dmax:
            dmax = len(targets)
    o.dmax = dmax
    o.degeneracy = degeneracy
    o.alpha_hat = alpha_from_degeneracy(degeneracy)
    o.epoch = epoch
    return o


class AcyclicProvider:
    """Keeps an :class:`Orientation` of a :class:`DynGraph` up to date.

    ``rebuild_period=None`` means "half the edge count at the last rebuild".
    The orientation object is mutated in place so engines may hold on to it.
    """

    def __init__(
        self,
        graph: DynGraph,
        rebuild_period: Optional[int] = None,
        cap_factor: int = 2,
    ):
        self.graph = graph
        self.rebuild_period = rebuild_period
        self.cap_factor = cap_factor
        self.orientation = Orientation(graph.n)
        self.rebuilds = 0
        self._since = 0
        self._period = 1
        self.rebuild()
        graph.subscribe(self.notify_update)

    def detach(self) -> None:
        self.graph.unsubscribe(self.notify_update)

    def cap(self) -> int:
        return out_degree_cap(self.orientation.alpha_hat, self.cap_factor)

    def rebuild(self) -> Orientation:
        fresh = rebuild_acyclic(self.graph, self.graph.epoch)
        o = self.orientation
        o.copy_from(fresh)
        o.epoch = self.graph.epoch
        self.rebuilds += 1
        self._since = 0
        if self.rebuild_period is None:
            self._period = max(1, self.graph.m // 2)
        else:
            self._period = max(1, self.rebuild_period)
        return o

    def notify_update(self, change: UpdateReceipt) -> None:
        o = self.orientation
        u, w = change.u, change.v
        over_cap = False
        if change.inserted:
            if o.label[u] < o.label[w]:
                u, w = w, u
            o._add(u, w)
            over_cap = len(o.out[u]) > self.cap()
        else:
            owner = o.owner(u, w)
            if owner is None:
                raise KeyError(f"edge {{{u}, {w}}} unknown to orientation")
            o._remove(owner, w if owner == u else u)
        o.epoch = change.epoch
        o.version += 1
        self._since += 1
        if over_cap or self._since >= self._period:
            self.rebuild()


class FlipProvider:
    """Cap-preserving orientation by edge flips, not necessarily acyclic.

    New edges leave the endpoint with the smaller out-degree.  A vertex whose
    out-degree exceeds the cap flips all its out-edges; when a cascade needs
    more than ``flip_budget`` flips (the estimate ``alpha_hat`` has fallen
    behind the graph) the provider re-peels and refreshes the estimate.
    ``rebuild_period=None`` disables periodic re-peeling.
    """

    def __init__(
        self,
        graph: DynGraph,
        rebuild_period: Optional[int] = None,
        cap_factor: int = 2,
        flip_budget: Optional[int] = None,
    ):
        self.graph = graph
        self.rebuild_period = rebuild_period
        self.cap_factor = cap_factor
        self.flip_budget = flip_budget
        self.orientation = Orientation(graph.n)
        self.orientation.acyclic = False
        self.rebuilds = 0
        self.flips = 0
        self._since = 0
        self.rebuild()
        graph.subscribe(self.notify_update)

    def detach(self) -> None:
        self.graph.unsubscribe(self.notify_update)

    def cap(self) -> int:
        return out_degree_cap(self.orientation.alpha_hat, self.cap_factor)

    def rebuild(self) -> Orientation:
        fresh = rebuild_acyclic(self.graph, self.graph.epoch)
        fresh.acyclic = False  # flips will break the label order
        o = self.orientation
        o.copy_from(fresh)
        o.epoch = self.graph.epoch
        self.rebuilds += 1
        self._since = 0
        return o

    def _budget(self) -> int:
        if self.flip_budget is not None:
            return self.flip_budget
        return 4 * self.graph.m + self.graph.n

    def _cascade(self, start: int, touched: set[int]) -> bool:
        """Flip out of overfull vertices; False once the budget runs out."""
        o = self.orientation
        cap = self.cap()
        budget = self._budget()
        flips = 0
        queue = [start]
        touched.add(start)
        while queue:
            u = queue.pop()
            if len(o.out[u]) <= cap:
                continue
            for w in list(o.out[u]):
                o._remove(u, w)
                o._add(w, u)
                touched.add(w)
                flips += 1
                if len(o.out[w]) > cap:
                    queue.append(w)
            if flips > budget:
                self.flips += flips
                return False
        self.flips += flips
        return True

    def notify_update(self, change: UpdateReceipt) -> None:
        o = self.orientation
        u, w = change.u, change.v
        ok = True
        if change.inserted:
            if len(o.out[u]) > len(o.out[w]):
                u, w = w, u
            d0 = o.dmax
            o._add(u, w)
            if len(o.out[u]) > self.cap():
                touched: set[int] = set()
                ok = self._cascade(u, touched)
                if ok:
                    # overfull vertices were transient; only settled slots count
                    o.dmax = max([d0] + [max(o.parent[v], default=-1) + 1 for v in touched])
        else:
            owner = o.owner(u, w)
            if owner is None:
                raise KeyError(f"edge {{{u}, {w}}} unknown to orientation")
            o._remove(owner, w if owner == u else u)
        o.epoch = change.epoch
        o.version += 1
        self._since += 1
        periodic = self.rebuild_period is not None and self._since >= max(1, self.rebuild_period)
        if not ok or periodic:
            self.rebuild()
