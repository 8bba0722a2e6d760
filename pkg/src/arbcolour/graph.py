"""Dynamic undirected graph on a fixed vertex set."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator


class GraphError(ValueError):
    """Base class for illegal graph operations."""


class VertexOutOfRange(GraphError, IndexError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class MissingEdge(GraphError, KeyError):
    pass


@dataclass(frozen=True)
class UpdateReceipt:
    epoch: int
    inserted: bool
    u: int
    v: int


Listener = Callable[[UpdateReceipt], None]


class DynGraph:
    """Undirected simple graph on vertices ``0..n-1`` undergoing edge updates.

    Every successful update bumps ``epoch`` by exactly one and is forwarded
    to subscribed listeners (the orientation provider, mostly).
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = int(n)
        self.adj: list[set[int]] = [set() for _ in range(self.n)]
        self.m = 0
        self.epoch = 0
        self._listeners: list[Listener] = []

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DynGraph":
        g = cls(n)
        for u, v in edges:
            g.insert_edge(u, v)
        return g

    def subscribe(self, listener: Listener) -> None:
        self._listeners.append(listener)

    def unsubscribe(self, listener: Listener) -> None:
        self._listeners.remove(listener)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {self.n})")

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self.adj[u]

    def insert_edge(self, u: int, v: int) -> UpdateReceipt:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        if v in self.adj[u]:
            raise DuplicateEdge(f"edge {{{u}, {v}}} already present")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1
        return self._commit(True, u, v)

    def delete_edge(self, u: int, v: int) -> UpdateReceipt:
        self._check_vertex(u)
        self._check_vertex(v)
        if v not in self.adj[u]:
            raise MissingEdge(f"edge {{{u}, {v}}} not present")
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.m -= 1
        return self._commit(False, u, v)

    def _commit(self, inserted: bool, u: int, v: int) -> UpdateReceipt:
        self.epoch += 1
        receipt = UpdateReceipt(self.epoch, inserted, u, v)
        for listener in self._listeners:
            listener(receipt)
        return receipt

    def neighbours(self, v: int) -> list[int]:
        """Neighbours of ``v`` in ascending id order."""
        self._check_vertex(v)
        return sorted(self.adj[v])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each edge once, as ``(u, v)`` with ``u < v``, in sorted order."""
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield u, v

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def check_invariants(self) -> None:
        total = 0
        for u, nbrs in enumerate(self.adj):
            assert u not in nbrs, f"self-loop at {u}"
            for v in nbrs:
                assert u in self.adj[v], f"asymmetric edge {u}-{v}"
            total += len(nbrs)
        assert total == 2 * self.m, "edge count out of sync"

    def __repr__(self) -> str:
        return f"DynGraph(n={self.n}, m={self.m}, epoch={self.epoch})"
