"""Two-level randomised colouring through an arb-defective partition.

Level 1: vertices propose a class from a small palette, pruning classes that
more than ``p`` already-proposed out-neighbours chose.  Proposal order is
steered so that no clear vertex ever has more than ``2d`` proposed
in-neighbours (its *badness*).  A vertex with more than ``2(1+delta)p``
out-neighbours in its own class is excluded; excluded vertices are coloured
greedily from a reserved block.

Level 2: each class is coloured by :class:`SimpleCore` on the class subgraph,
which is filtered lazily from the orientation.

Proposal state is order dependent, so queries must be serialised.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..labels import ColourLabel
from ..orientation import Orientation
from ..prf import keyed, mix64
from .base import Engine
from .rand_simple import (
    FAILED,
    PaletteExhausted,
    SimpleCore,
    simple_batch,
    simple_palette_bound,
)

CLEAR, PROMPTED, SETTLED = 0, 1, 2
TAG_LEVEL1 = 0xB1
TAG_LEVEL2 = 0xB2
TAG_DELEGATE = 0xBD


def default_base_threshold(n: int) -> int:
    if n < 2:
        return 1
    return math.ceil(math.log2(n) ** 2 - 1e-9)


@dataclass(frozen=True)
class DefectiveParams:
    d: int
    p: int
    delta: float
    palette_size: int
    conflict_threshold: float

    @property
    def class_degree(self) -> int:
        """Out-degree bound inside a class, used as ``d`` at level 2."""
        return int(math.floor(self.conflict_threshold))


def defective_params(d: int, delta: float = 3, conflict_threshold: Optional[float] = None) -> DefectiveParams:
    dd = max(d, 2)
    p = max(1, math.ceil(math.log2(dd) ** 2 - 1e-9))
    palette = math.ceil(2 * (1 + delta) * dd / p - 1e-9)
    threshold = 2 * (1 + delta) * p if conflict_threshold is None else conflict_threshold
    return DefectiveParams(d=d, p=p, delta=delta, palette_size=palette, conflict_threshold=threshold)


@dataclass
class EpochLog:
    epoch: int
    d: int
    proposals: int
    unmotivated: int
    outcomes: int
    max_badness: int


class RandBetterColouring(Engine):
    name = "rand-better"

    def __init__(
        self,
        orientation: Orientation,
        seed: int = 0,
        delta: float = 3,
        base_threshold: Optional[int] = None,
        conflict_threshold: Optional[float] = None,
    ):
        super().__init__(orientation)
        if delta < 3:
            raise ValueError("delta must be at least 3")
        self.seed = seed
        self.delta = delta
        self.base_threshold = (
            default_base_threshold(orientation.n) if base_threshold is None else base_threshold
        )
        self.conflict_threshold = conflict_threshold
        self.epoch_log: list[EpochLog] = []
        self.min_pruned_palette: Optional[int] = None

    # state management

    def _reset(self) -> None:
        self._close_epoch()
        o = self.orientation
        self.d = o.dmax
        self.delegating = self.d < self.base_threshold
        self.proposals = 0
        self.unmotivated = 0
        self.outcomes1 = 0
        self.max_badness_seen = 0
        self._final: dict[int, int] = {}
        if self.delegating:
            self.simple = SimpleCore(o.out.__getitem__, self.d, self.seed, o.epoch, (TAG_DELEGATE,))
            return
        n = o.n
        self.params = defective_params(self.d, self.delta, self.conflict_threshold)
        self.status = [CLEAR] * n
        self.proposed = [-1] * n
        self.badness = [0] * n
        self._joined: dict[int, bool] = {}
        self._excl_res: dict[int, int] = {}
        self._classes: dict[int, SimpleCore] = {}
        self._class_out: dict[int, list[int]] = {}
        self.class_block = simple_palette_bound(self.params.class_degree)

    def _snapshot(self) -> Optional[EpochLog]:
        if not getattr(self, "proposals", 0) or self.delegating:
            return None
        return EpochLog(
            epoch=self._epoch_of_state,
            d=self.d,
            proposals=self.proposals,
            unmotivated=self.unmotivated,
            outcomes=self.outcomes(),
            max_badness=self.max_badness_seen,
        )

    def _close_epoch(self) -> None:
        snap = self._snapshot()
        if snap is not None:
            self.epoch_log.append(snap)
        self._epoch_of_state = self.orientation.epoch

    def proposal_log(self) -> list[EpochLog]:
        """Per-epoch proposal accounting, including the running epoch."""
        snap = self._snapshot() if self._version == self.orientation.version else None
        return self.epoch_log + ([snap] if snap is not None else [])

    def outcomes(self) -> int:
        """Distinct experiment outcomes determined so far, across both levels."""
        if self.delegating:
            return self.simple.experiments
        return self.outcomes1 + sum(core.experiments for core in self._classes.values())

    # level 1

    def propose_colour_better(self, v: int) -> int:
        self._sync()
        if self.delegating:
            raise RuntimeError("engine delegates to rand-simple at this out-degree")
        return self._propose(v)

    def _propose(self, v: int) -> int:
        status = self.status
        if status[v] != CLEAR:
            return self.proposed[v]
        out = self.orientation.out
        badness = self.badness
        cap = 2 * self.d
        group = [v]
        members = {v}
        extra: dict[int, int] = {}
        frontier = [v]
        while frontier:
            grown = []
            for u in frontier:
                for w in out[u]:
                    if status[w] == CLEAR and w not in members:
                        e = extra.get(w, 0) + 1
                        extra[w] = e
                        if badness[w] + e > cap:
                            members.add(w)
                            group.append(w)
                            grown.append(w)
            frontier = grown
        self.unmotivated += len(group) - 1
        label = self.orientation.label
        group.sort(key=label.__getitem__)
        for u in group:
            self._draw(u)
        return self.proposed[v]

    def _draw(self, u: int) -> None:
        out = self.orientation.out[u]
        status, proposed, badness = self.status, self.proposed, self.badness
        par = self.params
        counts = Counter(proposed[w] for w in out if status[w] != CLEAR)
        banned = {c for c, k in counts.items() if k > par.p}
        size = par.palette_size - len(banned)
        if self.min_pruned_palette is None or size < self.min_pruned_palette:
            self.min_pruned_palette = size
        h = keyed(self.seed, self.orientation.epoch, TAG_LEVEL1, u)
        attempt = 0
        while True:
            c = mix64(h ^ attempt) % par.palette_size
            if c not in banned:
                break
            attempt += 1
        proposed[u] = c
        status[u] = PROMPTED
        badness[u] = 0
        for w in out:
            if status[w] == CLEAR:
                b = badness[w] + 1
                badness[w] = b
                if b > self.max_badness_seen:
                    self.max_badness_seen = b
        self.proposals += 1

    def conflict_status(self, v: int) -> bool:
        """True if ``v`` joins the class it proposed, False if excluded."""
        self._sync()
        if self.delegating:
            raise RuntimeError("engine delegates to rand-simple at this out-degree")
        return self._status(v)

    def _status(self, v: int) -> bool:
        joined = self._joined.get(v)
        if joined is not None:
            return joined
        c = self._propose(v)
        out = self.orientation.out[v]
        for w in out:
            if self.status[w] == CLEAR:
                self._propose(w)
        proposed = self.proposed
        count = sum(1 for w in out if proposed[w] == c)
        joined = count <= self.params.conflict_threshold
        self._joined[v] = joined
        self.status[v] = SETTLED
        self.outcomes1 += 1
        return joined

    # residual block for excluded vertices

    def _excluded_residual(self, v: int) -> int:
        res = self._excl_res
        if v in res:
            return res[v]
        out = self.orientation.out
        size = 3 * self.d + 1
        stack = [v]
        while stack:
            u = stack[-1]
            if u in res:
                stack.pop()
                continue
            excl = [w for w in out[u] if not self._status(w)]
            pending = [w for w in excl if w not in res]
            if pending:
                stack.extend(pending)
                continue
            used = {res[w] for w in excl}
            c = 0
            while c in used:
                c += 1
            if c >= size:
                raise PaletteExhausted(f"excluded vertex {u} needs colour {c}")
            res[u] = c
            stack.pop()
        return res[v]

    # level 2

    def _class_members_out(self, u: int) -> list[int]:
        cached = self._class_out.get(u)
        if cached is not None:
            return cached
        c = self.proposed[u]
        members = []
        for w in self.orientation.out[u]:
            if self._propose(w) == c and self._status(w):
                members.append(w)
        self._class_out[u] = members
        return members

    def class_core(self, c: int) -> SimpleCore:
        core = self._classes.get(c)
        if core is None:
            core = self._classes[c] = SimpleCore(
                self._class_members_out,
                self.params.class_degree,
                self.seed,
                self.orientation.epoch,
                (TAG_LEVEL2, c),
            )
        return core

    # queries

    def colour(self, v: int) -> int:
        return self.label(v).value

    def label(self, v: int) -> ColourLabel:
        self._sync()
        self._check(v)
        if self.delegating:
            core = self.simple
            k = core.kappa(v)
            if k != FAILED:
                return ColourLabel(self.name, k, k, (("delegate", None), ("simple", None)))
            r = core.residual(v)
            return ColourLabel(
                self.name, core.M + r, r, (("delegate", None), ("residual", None)), residual=True
            )
        B = self.class_block
        if self._status(v):
            c = self.proposed[v]
            core = self.class_core(c)
            k = core.kappa(v)
            if k != FAILED:
                leaf, kind, inner = k, "simple", k
            else:
                leaf = core.residual(v)
                kind, inner = "residual", core.M + leaf
            value = c * B + inner
            self._final.setdefault(v, value)
            return ColourLabel(self.name, value, leaf, (("class", c), (kind, None)), residual=kind == "residual")
        r = self._excluded_residual(v)
        value = self.params.palette_size * B + r
        self._final.setdefault(v, value)
        return ColourLabel(self.name, value, r, (("excluded", None),), residual=True)

    def colour_all(self) -> np.ndarray:
        self._sync()
        if self.delegating:
            o = self.orientation
            src, dst = o.edge_arrays()
            values, _ = simple_batch(
                o.n, src, dst, o.out, o.topological_order(), self.d, self.seed, o.epoch, (TAG_DELEGATE,)
            )
            return values
        return super().colour_all()

    def palette_bound(self) -> int:
        self._sync()
        if self.delegating:
            return simple_palette_bound(self.d)
        return self.params.palette_size * self.class_block + 3 * self.d + 1

    # inspection

    def settled_values(self) -> dict[int, int]:
        """Colours returned so far in this epoch."""
        self._sync()
        return dict(self._final)

    def max_badness(self) -> int:
        self._sync()
        if self.delegating:
            return 0
        return max(self.badness, default=0)

    def check_state(self) -> None:
        self._sync()
        if self.delegating:
            return
        cap = 2 * self.d
        for v, (st, b) in enumerate(zip(self.status, self.badness)):
            assert b <= cap, f"badness {b} > {cap} at {v}"
            assert st == CLEAR or b == 0, f"non-clear vertex {v} has badness {b}"
            assert (st == CLEAR) == (self.proposed[v] < 0)
            assert (st == SETTLED) == (v in self._joined)

    def excluded_component(self, v: int) -> set[int]:
        self._sync()
        if self.delegating or self._status(v):
            return set()
        out = self.orientation.out
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in out[u]:
                if w not in seen and not self._status(w):
                    seen.add(w)
                    stack.append(w)
        return seen
