"""Randomised colouring by colour experiments plus greedy residual colouring.

Each vertex draws ``L`` colours from ``[M]``; it keeps the smallest one that
no out-neighbour drew.  Vertices where every draw collides are FAILED and are
coloured greedily from a separate block of ``3d + 1`` colours, taking the
smallest colour unused by their FAILED out-neighbours.  Because the
orientation is acyclic this greedy rule is a well-founded recursion, so the
answer does not depend on the order in which vertices are queried.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from ..labels import ColourLabel
from ..orientation import Orientation
from ..prf import keyed, keyed_array, mix64, mix64_array
from .base import Engine

FAILED = -1
TAG_SIMPLE = 0x5151


class PaletteExhausted(RuntimeError):
    pass


def ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


def experiment_sizes(d: int) -> tuple[int, int]:
    """``(L, M)``: draws per vertex and experiment palette size."""
    dd = max(d, 2)
    lg = ceil_log2(dd)
    return max(1, 4 * lg), 8 * dd * lg


def simple_palette_bound(d: int) -> int:
    return experiment_sizes(d)[1] + 3 * d + 1


class SimpleCore:
    """Colour experiments over an arbitrary acyclic out-neighbour function."""

    def __init__(
        self,
        out_fn: Callable[[int], Iterable[int]],
        d: int,
        seed: int,
        epoch: int,
        tag: Sequence[int] = (TAG_SIMPLE,),
    ):
        self.out = out_fn
        self.d = d
        self.L, self.M = experiment_sizes(d)
        self.skip = d <= 4
        self.residual_size = 3 * d + 1
        self.seed = seed
        self.epoch = epoch
        self.tag = tuple(tag)
        self._props: dict[int, tuple[int, ...]] = {}
        self._kappa: dict[int, int] = {}
        self._res: dict[int, int] = {}
        self.experiments = 0

    def proposals(self, u: int) -> tuple[int, ...]:
        c = self._props.get(u)
        if c is None:
            h = keyed(self.seed, self.epoch, *self.tag, u)
            M = self.M
            c = self._props[u] = tuple(mix64(h ^ j) % M for j in range(self.L))
        return c

    def kappa(self, u: int) -> int:
        k = self._kappa.get(u)
        if k is not None:
            return k
        self.experiments += 1
        if self.skip:
            k = FAILED
        else:
            taken: set[int] = set()
            for w in self.out(u):
                taken.update(self.proposals(w))
            free = [c for c in self.proposals(u) if c not in taken]
            k = min(free) if free else FAILED
        self._kappa[u] = k
        return k

    def failed(self, u: int) -> bool:
        return self.kappa(u) == FAILED

    def residual(self, v: int) -> int:
        res = self._res
        if v in res:
            return res[v]
        stack = [v]
        while stack:
            u = stack[-1]
            if u in res:
                stack.pop()
                continue
            failed_out = [w for w in self.out(u) if self.kappa(w) == FAILED]
            pending = [w for w in failed_out if w not in res]
            if pending:
                stack.extend(pending)
                continue
            used = {res[w] for w in failed_out}
            c = 0
            while c in used:
                c += 1
            if c >= self.residual_size:
                raise PaletteExhausted(f"vertex {u} needs residual colour {c}")
            res[u] = c
            stack.pop()
        return res[v]

    def value(self, u: int) -> int:
        k = self.kappa(u)
        if k != FAILED:
            return k
        return self.M + self.residual(u)

    def component(self, v: int) -> set[int]:
        """FAILED vertices forward-reachable from ``v`` through FAILED vertices."""
        if not self.failed(v):
            return set()
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in self.out(u):
                if w not in seen and self.failed(w):
                    seen.add(w)
                    stack.append(w)
        return seen


def simple_batch(
    n: int,
    src: np.ndarray,
    dst: np.ndarray,
    out: Sequence[Iterable[int]],
    topo: Sequence[int],
    d: int,
    seed: int,
    epoch: int,
    tag: Sequence[int] = (TAG_SIMPLE,),
    chunk: int = 1 << 15,
) -> tuple[np.ndarray, np.ndarray]:
    """All values of :class:`SimpleCore` at once; returns ``(values, failed)``."""
    L, M = experiment_sizes(d)
    if d <= 4:
        failed = np.ones(n, dtype=bool)
        kappa = np.full(n, M, dtype=np.int64)
    else:
        h = keyed_array(seed, epoch, *tag, np.arange(n, dtype=np.uint64))
        props = (mix64_array(h[:, None] ^ np.arange(L, dtype=np.uint64)[None, :]) % np.uint64(M)).astype(np.int64)
        collide = np.zeros((n, L), dtype=bool)
        for lo in range(0, len(src), chunk):
            s, t = src[lo:lo + chunk], dst[lo:lo + chunk]
            hit = (props[s][:, :, None] == props[t][:, None, :]).any(axis=2)
            starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
            part = np.logical_or.reduceat(hit, starts, axis=0)
            collide[s[starts]] |= part
        masked = np.where(collide, M, props)
        kappa = masked.min(axis=1)
        failed = kappa == M
    values = kappa.copy()
    if failed.any():
        res = {}
        size = 3 * d + 1
        for u in topo:
            if not failed[u]:
                continue
            used = {res[w] for w in out[u] if failed[w]}
            c = 0
            while c in used:
                c += 1
            if c >= size:
                raise PaletteExhausted(f"vertex {u} needs residual colour {c}")
            res[u] = c
            values[u] = M + c
    return values, failed


class RandSimpleColouring(Engine):
    name = "rand-simple"

    def __init__(self, orientation: Orientation, seed: int = 0, tag: Sequence[int] = (TAG_SIMPLE,)):
        super().__init__(orientation)
        self.seed = seed
        self.tag = tuple(tag)

    def _reset(self) -> None:
        o = self.orientation
        self.core = SimpleCore(o.out.__getitem__, o.dmax, self.seed, o.epoch, self.tag)

    def propose_colour(self, v: int) -> int:
        """Accepted experiment colour of ``v`` or ``FAILED``."""
        self._sync()
        self._check(v)
        return self.core.kappa(v)

    def colour_residual(self, v: int) -> int:
        self._sync()
        return self.core.residual(v)

    def colour(self, v: int) -> int:
        self._sync()
        self._check(v)
        return self.core.value(v)

    def label(self, v: int) -> ColourLabel:
        self._sync()
        self._check(v)
        k = self.core.kappa(v)
        if k != FAILED:
            return ColourLabel(self.name, value=k, leaf=k, path=(("simple", None),))
        r = self.core.residual(v)
        return ColourLabel(self.name, value=self.core.M + r, leaf=r, path=(("residual", None),), residual=True)

    def residual_component(self, v: int) -> set[int]:
        self._sync()
        return self.core.component(v)

    def colour_all(self) -> np.ndarray:
        self._sync()
        o = self.orientation
        src, dst = o.edge_arrays()
        values, self.last_failed = simple_batch(
            o.n, src, dst, o.out, o.topological_order(), o.dmax, self.seed, o.epoch, self.tag
        )
        return values

    def palette_bound(self) -> int:
        return simple_palette_bound(self.orientation.dmax)
