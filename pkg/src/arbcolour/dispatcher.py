"""Routing between whole-graph engines and random vertex partitions.

When the arboricity estimate is small the configured engine answers on the
whole graph.  Otherwise the vertices are split at random into
``y = ceil(8 * 2**i / log2 n)`` parts for the scale ``i = ceil(log2 alpha)``,
each part's induced subgraph is oriented afresh, and a vertex colour is the
pair (part, inner colour), flattened as ``inner * y + part``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engines import INNER_ENGINES, Engine, make_engine, resolve_auto
from .engines.rand_better import default_base_threshold
from .graph import DynGraph, VertexOutOfRange
from .labels import ColourLabel
from .orientation import Orientation, rebuild_acyclic
from .prf import keyed, keyed_array

_MASK63 = (1 << 63) - 1


class PartitionFamily:
    """Keyed random partitions, one per scale ``i in [0, ceil(log2 n)]``."""

    def __init__(self, n: int, seed: int = 0, repartition_period: Optional[int] = None):
        self.n = n
        self.seed = seed
        self.log_n = math.log2(n) if n > 1 else 1.0
        self.max_scale = math.ceil(self.log_n)
        self.repartition_period = repartition_period or max(1, n * n)

    def parts(self, i: int) -> int:
        return max(1, math.ceil(8 * 2**i / self.log_n - 1e-9))

    def generation(self, epoch: int) -> int:
        return epoch // self.repartition_period

    def _gen_seed(self, epoch: int) -> int:
        return keyed(self.seed, self.generation(epoch))

    def part(self, v: int, i: int, epoch: int = 0) -> int:
        return keyed(self._gen_seed(epoch), i, v) % self.parts(i)

    def assignment(self, i: int, epoch: int = 0) -> np.ndarray:
        h = keyed_array(self._gen_seed(epoch), i, np.arange(self.n, dtype=np.uint64))
        return (h % np.uint64(self.parts(i))).astype(np.int64)


class PartView:
    """Subgraph induced by one part, on local vertex ids ``0..len(members)-1``."""

    def __init__(self, scale: int, part: int, members: list[int]):
        self.scale = scale
        self.part = part
        self.members = members
        self.local = {v: k for k, v in enumerate(members)}
        self.n = len(members)
        self.adj: list[set[int]] = [set() for _ in members]
        self.orientation: Optional[Orientation] = None
        self.engine: Optional[Engine] = None

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2


def part_view(g: DynGraph, assign: list[int], members: list[int], scale: int, part: int) -> PartView:
    """The view of a single part; touches only the adjacency of its members."""
    view = PartView(scale, part, members)
    local = view.local
    for lu, u in enumerate(members):
        view.adj[lu] = {local[w] for w in g.adj[u] if assign[w] == part}
    return view


def _members(assign: list[int], parts: int) -> list[list[int]]:
    members: list[list[int]] = [[] for _ in range(parts)]
    for v, j in enumerate(assign):
        members[j].append(v)
    return members


def part_subgraph_views(g: DynGraph, assignment: np.ndarray, scale: int, parts: int) -> list[PartView]:
    """All part views of one scale, keeping only edges inside a part."""
    assign = assignment.tolist()
    members = _members(assign, parts)
    views = [PartView(scale, j, members[j]) for j in range(parts)]
    for u in range(g.n):
        j = assign[u]
        view = views[j]
        lu = view.local[u]
        for w in g.adj[u]:
            if w > u and assign[w] == j:
                lw = view.local[w]
                view.adj[lu].add(lw)
                view.adj[lw].add(lu)
    return views


@dataclass(frozen=True)
class Route:
    direct: bool
    scale: Optional[int]
    parts: int
    engine: str


class Dispatcher:
    name = "dispatcher"

    def __init__(
        self,
        graph: DynGraph,
        orientation: Orientation,
        engine: str = "auto-min",
        seed: int = 0,
        delta: float = 3,
        base_threshold: Optional[int] = None,
        direct_threshold: Optional[int] = None,
        partition_seed: int = 0,
        repartition_period: Optional[int] = None,
    ):
        if engine not in INNER_ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        self.graph = graph
        self.orientation = orientation
        self.engine = engine
        self.seed = seed
        self.delta = delta
        n = graph.n
        self.base_threshold = default_base_threshold(n) if base_threshold is None else base_threshold
        self.direct_threshold = (
            max(1, math.ceil(math.log2(n))) if direct_threshold is None and n > 1 else direct_threshold or 1
        )
        self.partitions = PartitionFamily(n, partition_seed, repartition_period)
        self._direct: dict[str, Engine] = {}
        self._version = -1
        self._split_key: Optional[tuple[int, int]] = None

    def _inner_name(self, d: int) -> str:
        if self.engine == "auto-min":
            return resolve_auto(d, self.delta, self.base_threshold)
        return self.engine

    def _sync(self) -> None:
        if self._version == self.orientation.version:
            return
        self._version = self.orientation.version
        o = self.orientation
        self._views: dict[int, PartView] = {}
        if o.alpha_hat <= self.direct_threshold:
            name = self._inner_name(o.dmax)
            if name not in self._direct:
                self._direct[name] = make_engine(name, o, self.seed, self.delta, self.base_threshold)
            self._inner = self._direct[name]
            self.route = Route(True, None, 1, name)
        else:
            i = min(math.ceil(math.log2(o.alpha_hat)), self.partitions.max_scale)
            y = self.partitions.parts(i)
            self.route = Route(False, i, y, self.engine)
            key = (i, self.partitions.generation(self.graph.epoch))
            if key != self._split_key:
                # the split only moves with the scale or the generation
                self._split_key = key
                self._assign = self.partitions.assignment(i, self.graph.epoch)
                self._assign_list = self._assign.tolist()
                self._members = _members(self._assign_list, y)

    def reset_cache(self) -> None:
        self._version = -1
        for eng in self._direct.values():
            eng.reset_cache()

    def _part_view(self, j: int) -> PartView:
        view = self._views.get(j)
        if view is None:
            view = self._views[j] = part_view(
                self.graph, self._assign_list, self._members[j], self.route.scale, j
            )
        return view

    def _part_views(self) -> list[PartView]:
        return [self._part_view(j) for j in range(self.route.parts)]

    def _part_engine(self, view: PartView) -> Engine:
        if view.engine is None:
            o = rebuild_acyclic(view, self.graph.epoch)
            view.orientation = o
            seed = keyed(self.seed, view.scale, view.part) & _MASK63
            view.engine = make_engine(self._inner_name(o.dmax), o, seed, self.delta, self.base_threshold)
        return view.engine

    def part_orientations(self) -> list[Orientation]:
        """Rebuilt orientations of every part at the routed scale."""
        self._sync()
        if self.route.direct:
            return []
        views = self._part_views()
        for view in views:
            self._part_engine(view)
        return [view.orientation for view in views]

    def label(self, v: int) -> ColourLabel:
        self._sync()
        if not 0 <= v < self.graph.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {self.graph.n})")
        if self.route.direct:
            inner = self._inner.label(v)
            return ColourLabel(
                self.name,
                inner.value,
                inner.leaf,
                (("direct", inner.engine),) + inner.path,
                residual=inner.residual,
            )
        j = int(self._assign[v])
        view = self._part_view(j)
        eng = self._part_engine(view)
        inner = eng.label(view.local[v])
        return ColourLabel(
            self.name,
            inner.value * self.route.parts + j,
            inner.leaf,
            (("engine", inner.engine),) + inner.path,
            part=(self.route.scale, j),
            residual=inner.residual,
        )

    def colour(self, v: int) -> int:
        self._sync()
        if self.route.direct:
            if not 0 <= v < self.graph.n:
                raise VertexOutOfRange(f"vertex {v} not in [0, {self.graph.n})")
            return self._inner.colour(v)
        return self.label(v).value

    colour_query = label

    def colour_all(self) -> np.ndarray:
        self._sync()
        if self.route.direct:
            return self._inner.colour_all()
        y = self.route.parts
        values = np.zeros(self.graph.n, dtype=np.int64)
        for view in self._part_views():
            if not view.members:
                continue
            inner = self._part_engine(view).colour_all()
            values[np.asarray(view.members, dtype=np.int64)] = inner * y + view.part
        return values

    def palette_bound(self) -> int:
        """Flattened palette: parts times the largest inner palette."""
        self._sync()
        if self.route.direct:
            return self._inner.palette_bound()
        inner = max(
            (self._part_engine(view).palette_bound() for view in self._part_views()), default=1
        )
        return inner * self.route.parts

    def max_out_degree(self) -> int:
        self._sync()
        if self.route.direct:
            return self.orientation.max_out_degree()
        return max((o.max_out_degree() for o in self.part_orientations()), default=0)
