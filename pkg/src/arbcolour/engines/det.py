"""Deterministic colouring: two rounds of cover-free colour reduction.

Level 0 is the slot-forest colouring.  At level ``j`` a vertex maps its own
and its out-neighbours' level ``j-1`` colours to polynomial sets and takes
the first point of its own set that no out-neighbour's set contains.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..base_colouring import BaseColouring
from ..cover_free import (
    CfParams,
    NoUncoveredElement,
    PolySet,
    colour_to_set,
    point_index,
    select_params,
    uncovered_element,
)
from ..labels import ColourLabel
from ..orientation import Orientation
from .base import Engine

LEVELS = 2


def reduce_batch(colours: np.ndarray, p: CfParams, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """One reduction round for every vertex at once."""
    n = len(colours)
    q = p.q
    dt = np.int32 if q * q < 2**31 else np.int64
    t = np.arange(q, dtype=dt)
    # level-0 colours can exceed int64; object arrays keep them exact
    x = colours if colours.dtype == object else colours.astype(np.int64)
    coeffs = []
    for _ in range(p.deg + 1):
        x, d = x // q, x % q
        coeffs.append(d.astype(dt))
    evals = np.zeros((n, q), dtype=dt)
    for c in reversed(coeffs):
        evals = (evals * t + c[:, None]) % q
    covered = np.zeros((n, q), dtype=bool)
    if len(src):
        agree = evals[src] == evals[dst]
        starts = np.flatnonzero(np.r_[True, src[1:] != src[:-1]])
        covered[src[starts]] = np.logical_or.reduceat(agree, starts, axis=0)
    if n and covered.all(axis=1).any():
        raise NoUncoveredElement("a vertex set is covered by its out-neighbours")
    first = covered.argmin(axis=1) if n else np.zeros(0, dtype=np.int64)
    return first * q + evals[np.arange(n), first].astype(np.int64)


class DeterministicColouring(Engine):
    name = "det"

    def __init__(self, orientation: Orientation):
        super().__init__(orientation)
        self.base = BaseColouring(orientation)
        self.trace: Optional[set[int]] = None

    def _reset(self) -> None:
        r = max(1, self.orientation.dmax)
        p1 = select_params(1 << self.orientation.dmax, r)
        p2 = select_params(p1.palette_size, r)
        self.params: list[Optional[CfParams]] = [None, p1, p2]
        self._memo: list[dict[int, int]] = [{} for _ in range(LEVELS + 1)]
        self._sets: list[dict[int, PolySet]] = [{} for _ in range(LEVELS + 1)]

    def _set(self, j: int, colour: int) -> PolySet:
        cache = self._sets[j]
        s = cache.get(colour)
        if s is None:
            s = cache[colour] = colour_to_set(colour, self.params[j])
        return s

    def reduce_colour(self, v: int, j: int) -> int:
        self._sync()
        if j == 0:
            if self.trace is not None:
                self.trace.add(v)
            return self.base.value(v)
        memo = self._memo[j]
        c = memo.get(v)
        if c is not None:
            return c
        own = self._set(j, self.reduce_colour(v, j - 1))
        others = [self._set(j, self.reduce_colour(w, j - 1)) for w in self.orientation.out[v]]
        c = point_index(uncovered_element(own, others), self.params[j].q)
        memo[v] = c
        return c

    def colour(self, v: int) -> int:
        self._check(v)
        return self.reduce_colour(v, LEVELS)

    def label(self, v: int) -> ColourLabel:
        c = self.colour(v)
        return ColourLabel(self.name, value=c, leaf=c, path=(("level", LEVELS),))

    def query_volume(self, v: int) -> int:
        """Vertices whose level-0 colour a cold query of ``v`` reads."""
        self.reset_cache()
        self.trace = set()
        try:
            self.colour(v)
            return len(self.trace)
        finally:
            self.trace = None

    def colour_all(self) -> np.ndarray:
        self._sync()
        o = self.orientation
        src, dst = o.edge_arrays()
        c = np.array(self.base.all_values(), dtype=np.int64 if o.dmax <= 62 else object)
        for j in range(1, LEVELS + 1):
            c = reduce_batch(c, self.params[j], src, dst)
        return c

    def palette_bound(self) -> int:
        self._sync()
        return self.params[LEVELS].palette_size
