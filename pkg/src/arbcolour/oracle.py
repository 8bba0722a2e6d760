"""Brute-force validators, written without reference to the engine internals.

Everything here reads a graph and the public query interface of an engine
(``label``, ``colour_all`` and the orientation the engine was built on), so it
can be used to cross-check the engines.
"""
from __future__ import annotations

import heapq
import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .cover_free import CfParams

COVERFREE_RANGE = 10**4
SUBSET_BUDGET = 10**6


class RangeTooLarge(ValueError):
    pass


@dataclass
class ValidationReport:
    proper: bool
    violating_edge: Optional[tuple[int, int]]
    palette_used: int
    max_colour: int
    component_size_histogram: dict[int, int] = field(default_factory=dict)
    max_out_degree: int = 0
    max_reach: int = 0
    residual_vertices: int = 0
    n: int = 0
    m: int = 0
    epoch: int = 0

    def summary(self) -> str:
        edge = "-" if self.violating_edge is None else f"{self.violating_edge[0]},{self.violating_edge[1]}"
        return (
            f"proper={self.proper} violating_edge={edge} palette_used={self.palette_used} "
            f"max_colour={self.max_colour} max_out_degree={self.max_out_degree} max_reach={self.max_reach}"
        )


_edge_cache: dict[int, tuple[int, object, np.ndarray]] = {}


def edge_array(g) -> np.ndarray:
    """``(m, 2)`` array of the edges of ``g``, cached while its epoch stands still."""
    epoch = getattr(g, "epoch", None)
    hit = _edge_cache.get(id(g))
    if hit is not None and hit[1] is g and epoch is not None and hit[0] == epoch:
        return hit[2]
    edges = [(u, w) for u in range(g.n) for w in g.adj[u] if u < w]
    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    _edge_cache.clear()
    _edge_cache[id(g)] = (epoch, g, arr)
    return arr


def first_conflict(values: np.ndarray, edges: np.ndarray) -> Optional[tuple[int, int]]:
    """Lexicographically smallest edge whose endpoints share a colour."""
    if len(edges) == 0:
        return None
    bad = np.flatnonzero(values[edges[:, 0]] == values[edges[:, 1]])
    if len(bad) == 0:
        return None
    hits = sorted(map(tuple, edges[bad].tolist()))
    return hits[0]


def check_colouring(g, values: Sequence[int]) -> ValidationReport:
    """Scan every edge of ``g`` against an explicit colour vector."""
    vals = np.asarray(values, dtype=np.int64)
    if len(vals) != g.n:
        raise ValueError(f"expected {g.n} colours, got {len(vals)}")
    edges = edge_array(g)
    bad = first_conflict(vals, edges)
    return ValidationReport(
        proper=bad is None,
        violating_edge=bad,
        palette_used=len(np.unique(vals)) if g.n else 0,
        max_colour=int(vals.max()) if g.n else -1,
        n=g.n,
        m=len(edges),
        epoch=getattr(g, "epoch", 0),
    )


def _residual_stats(g, keys: dict[int, object], out=None) -> tuple[dict[int, int], int]:
    """Component histogram of residual vertices and their max forward reach.

    Two residual vertices are linked when they share a key and an edge.  With
    ``out`` the reach of ``v`` is the set of same-key residual vertices reachable
    along out-edges; without it the component size is reported instead, which
    is an upper bound.
    """
    seen: set[int] = set()
    hist: Counter = Counter()
    max_reach = 0
    for v in sorted(keys):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w not in seen and keys.get(w, None) == keys[u] and w in keys:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        hist[len(comp)] += 1
        if out is None:
            max_reach = max(max_reach, len(comp))
            continue
        max_reach = max(max_reach, _max_forward_reach(comp, keys, out))
    return dict(sorted(hist.items())), max_reach


def _max_forward_reach(comp: list[int], keys: dict[int, object], out) -> int:
    """Largest forward-closed reach inside one component, via bitset closure."""
    index = {v: i for i, v in enumerate(comp)}
    key = keys[comp[0]]
    succ = [[index[w] for w in out[v] if w in index and keys[w] == key] for v in comp]
    # iterative post-order: successors are closed before their sources
    state = [0] * len(comp)
    reach = [0] * len(comp)
    best = 0
    for root in range(len(comp)):
        if state[root]:
            continue
        stack = [root]
        while stack:
            u = stack[-1]
            if state[u] == 0:
                state[u] = 1
                stack.extend(w for w in succ[u] if state[w] == 0)
                continue
            stack.pop()
            if state[u] == 2:
                continue
            acc = 1 << u
            for w in succ[u]:
                acc |= reach[w]
            reach[u] = acc
            state[u] = 2
            best = max(best, acc.bit_count())
    return best


def _engine_out_degree(engine) -> int:
    if hasattr(engine, "max_out_degree"):
        return engine.max_out_degree()
    return engine.orientation.max_out_degree()


def materialise_and_check(
    engine,
    g,
    order: Optional[Iterable[int]] = None,
    batch: bool = False,
    residual_stats: bool = True,
) -> ValidationReport:
    """Query every vertex once, then scan every edge.

    ``order`` fixes the query order (default ascending ids).  With ``batch``
    the engine's ``colour_all`` is used instead of per-vertex queries; the
    residual statistics are then only filled when the engine exposes the
    failure mask of its last batch.  ``residual_stats=False`` skips the
    component and reach statistics when only propriety matters.
    """
    n = g.n
    keys: dict[int, object] = {}
    direct = True
    if batch:
        values = np.asarray(engine.colour_all(), dtype=np.int64)
        failed = getattr(engine, "last_failed", None)
        if failed is not None:
            keys = {int(v): None for v in np.flatnonzero(failed)}
    else:
        values = np.full(n, -1, dtype=np.int64)
        seq = range(n) if order is None else order
        for v in seq:
            lab = engine.label(v)
            values[v] = lab.value
            if lab.residual:
                keys[v] = (lab.part, lab.path)
                direct = direct and lab.part is None
        if (values < 0).any():
            raise ValueError("query order did not cover every vertex")
    report = check_colouring(g, values)
    report.max_out_degree = _engine_out_degree(engine)
    report.residual_vertices = len(keys)
    if keys and residual_stats:
        out = engine.orientation.out if direct and hasattr(engine, "orientation") else None
        report.component_size_histogram, report.max_reach = _residual_stats(g, keys, out)
    return report


# degeneracy


def degeneracy_peel(g) -> tuple[int, list[int]]:
    """Repeatedly remove a minimum-degree vertex by a full scan (smallest id on ties)."""
    n = g.n
    big = np.iinfo(np.int64).max
    deg = np.array([len(g.adj[v]) for v in range(n)], dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    order = []
    degeneracy = 0
    for _ in range(n):
        v = int(np.argmin(np.where(alive, deg, big)))
        degeneracy = max(degeneracy, int(deg[v]))
        alive[v] = False
        order.append(v)
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
    return degeneracy, order


def bucket_peel(g) -> tuple[int, list[int]]:
    """Bucket-queue peel with a min-heap of ids inside each degree bucket."""
    n = g.n
    deg = [len(g.adj[v]) for v in range(n)]
    top = max(deg, default=0)
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    for b in buckets:
        heapq.heapify(b)
    alive = [True] * n
    order = []
    degeneracy = 0
    low = 0
    for _ in range(n):
        while True:
            while not buckets[low]:
                low += 1
            v = heapq.heappop(buckets[low])
            if alive[v] and deg[v] == low:
                break
        alive[v] = False
        order.append(v)
        degeneracy = max(degeneracy, low)
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                heapq.heappush(buckets[deg[w]], w)
                if deg[w] < low:
                    low = deg[w]
    return degeneracy, order


# cover-free families


@dataclass
class CoverFreeReport:
    ok: bool
    method: str
    checked: int
    witness: Optional[tuple[int, tuple[int, ...]]] = None


def _evaluations(q: int, deg: int) -> np.ndarray:
    """Row ``x`` holds the polynomial with base-q digits of ``x`` at every point."""
    N = q ** (deg + 1)
    t = np.arange(q, dtype=np.int64)
    ids = np.arange(N, dtype=np.int64)
    coeffs = []
    for _ in range(deg + 1):
        ids, d = np.divmod(ids, q)
        coeffs.append(d)
    # direct power sum, kept apart from the Horner evaluation in the engines
    powers = np.stack([pow_mod(t, j, q) for j in range(deg + 1)])
    ev = np.zeros((N, q), dtype=np.int64)
    for j, c in enumerate(coeffs):
        ev = (ev + c[:, None] * powers[j][None, :]) % q
    return ev


def pow_mod(t: np.ndarray, j: int, q: int) -> np.ndarray:
    out = np.ones_like(t)
    for _ in range(j):
        out = (out * t) % q
    return out


def _covered(masks: Sequence[int], full: int) -> bool:
    acc = 0
    for m in masks:
        acc |= m
    return acc == full


def coverfree_report(p: CfParams, budget: int = SUBSET_BUDGET, seed: int = 0) -> CoverFreeReport:
    """Check that no set of the family is covered by ``r`` others.

    Literal enumeration of (target, r-subset) pairs when their number fits
    ``budget``.  Otherwise an exact certificate: agreements of two sets depend
    only on their difference polynomial, so every target sees the same
    multiset of overlap sizes; if the ``r`` largest overlaps sum to less than
    ``q`` no ``r`` sets can cover a target.  When the certificate does not
    hold, ``budget`` random pairs are tried instead.
    """
    q, deg, r = p.q, p.deg, p.r
    N = q ** (deg + 1)
    if N > COVERFREE_RANGE:
        raise RangeTooLarge(f"q^(deg+1) = {N} exceeds {COVERFREE_RANGE}")
    ev = _evaluations(q, deg)
    full = (1 << q) - 1
    pairs = N * math.comb(N - 1, r)
    if pairs <= budget:
        # pairs <= budget forces q**4 <= budget, so masks fit in 64 bits
        weights = np.int64(1) << np.arange(q, dtype=np.int64)
        checked = 0
        for a in range(N):
            masks = ((ev == ev[a]) @ weights).tolist()
            others = [b for b in range(N) if b != a]
            for sub in itertools.combinations(others, r):
                checked += 1
                if _covered([masks[b] for b in sub], full):
                    return CoverFreeReport(False, "enumeration", checked, (a, sub))
        return CoverFreeReport(True, "enumeration", checked)
    # overlap of set 0 with every other set equals the root count of the difference
    overlaps = (ev[1:] == ev[0]).sum(axis=1)
    top = np.sort(overlaps)[::-1][:r]
    if int(top.sum()) < q:
        return CoverFreeReport(True, "certificate", N - 1)
    rng = random.Random(seed)
    for checked in range(1, budget + 1):
        a = rng.randrange(N)
        sub = tuple(rng.sample([b for b in range(N) if b != a], r)) if N < 64 else _sample_excluding(rng, N, a, r)
        covered = np.zeros(q, dtype=bool)
        for b in sub:
            covered |= ev[b] == ev[a]
        if covered.all():
            return CoverFreeReport(False, "sampled", checked, (a, sub))
    return CoverFreeReport(True, "sampled", budget)


def _sample_excluding(rng: random.Random, N: int, a: int, r: int) -> tuple[int, ...]:
    picked: set[int] = set()
    while len(picked) < r:
        b = rng.randrange(N)
        if b != a:
            picked.add(b)
    return tuple(sorted(picked))


def exhaustive_coverfree_check(p: CfParams, budget: int = SUBSET_BUDGET) -> bool:
    return coverfree_report(p, budget).ok


def valid_small_params(limit: int = COVERFREE_RANGE) -> list[CfParams]:
    """Every valid ``(q, deg, r)`` with ``q**(deg+1) <= limit`` (with ``k = 1``)."""
    out = []
    q = 2
    while q * q <= limit:
        if all(q % f for f in range(2, int(q**0.5) + 1)):
            deg = 1
            while q ** (deg + 1) <= limit:
                for r in range(1, q):
                    if r * deg < q:
                        out.append(CfParams(q=q, deg=deg, r=r, k=1))
                deg += 1
        q += 1
    return out
