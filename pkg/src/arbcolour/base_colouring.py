"""Implicit ``2**dmax`` colouring from the slot forests of an acyclic orientation.

Slot ``i`` gives every vertex at most one parent, and acyclicity makes that
a forest.  Bit ``i`` of a vertex colour is its depth parity in forest ``i``;
the two ends of an edge differ in the bit of the slot the edge occupies.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import VertexOutOfRange
from .orientation import Orientation


@dataclass(frozen=True)
class BaseColour:
    bits: tuple[int, ...]
    value: int


class BaseColouring:
    def __init__(self, orientation: Orientation):
        self.orientation = orientation
        self._version = -1
        self._parity: dict[int, list[int]] = {}
        self._values: dict[int, int] = {}

    def _sync(self) -> None:
        if self._version != self.orientation.version:
            self._version = self.orientation.version
            self._parity = {}
            self._values = {}

    @property
    def width(self) -> int:
        return self.orientation.dmax

    @property
    def palette_size(self) -> int:
        return 1 << self.orientation.dmax

    def parity(self, v: int, slot: int) -> int:
        self._sync()
        memo = self._parity.get(slot)
        if memo is None:
            memo = self._parity[slot] = [-1] * self.orientation.n
        parent = self.orientation.parent
        chain = []
        u = v
        while memo[u] < 0:
            w = parent[u].get(slot)
            if w is None:
                memo[u] = 0
                break
            chain.append(u)
            u = w
        p = memo[u]
        for x in reversed(chain):
            p ^= 1
            memo[x] = p
        return memo[v]

    def value(self, v: int) -> int:
        self._sync()
        cached = self._values.get(v)
        if cached is not None:
            return cached
        if not 0 <= v < self.orientation.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {self.orientation.n})")
        val = 0
        for s in range(self.orientation.dmax):
            if self.parity(v, s):
                val |= 1 << s
        self._values[v] = val
        return val

    def base_colour(self, v: int) -> BaseColour:
        val = self.value(v)
        bits = tuple((val >> s) & 1 for s in range(self.orientation.dmax))
        return BaseColour(bits, val)

    def all_values(self) -> list[int]:
        """Every vertex value in one pass over the topological order."""
        o = self.orientation
        vals = [0] * o.n
        for v in o.topological_order():
            val = 0
            for s, w in o.parent[v].items():
                if not (vals[w] >> s) & 1:
                    val |= 1 << s
            vals[v] = val
        return vals
