"""Seeded update-stream generators.

A stream starts with ``n <count>`` and continues with ``+ u v`` / ``- u v``
updates, ``? v`` queries and ``!`` validation directives.  Generators build an
initial graph, then churn it; a ``!`` follows every ``validate_every`` update
or query lines.
"""
from __future__ import annotations

import math
import random
from typing import Iterable, Iterator, Optional

KINDS = ("gnm", "planar-like", "star-burst", "clique-blocks")


class BadParams(ValueError):
    pass


class EdgePool:
    """Present/absent candidate edges with O(1) random pick and toggle."""

    def __init__(self, candidates: Iterable[tuple[int, int]], rng: random.Random):
        self.rng = rng
        self.absent = list(dict.fromkeys((min(u, v), max(u, v)) for u, v in candidates))
        self.present: list[tuple[int, int]] = []
        self._where = {e: (False, i) for i, e in enumerate(self.absent)}

    def _move(self, e, to_present: bool) -> None:
        src, dst = (self.absent, self.present) if to_present else (self.present, self.absent)
        _, i = self._where[e]
        last = src.pop()
        if last != e:
            src[i] = last
            self._where[last] = (not to_present, i)
        self._where[e] = (to_present, len(dst))
        dst.append(e)

    def pick_absent(self):
        return self.rng.choice(self.absent) if self.absent else None

    def pick_present(self):
        return self.rng.choice(self.present) if self.present else None

    def insert(self, e) -> None:
        self._move(e, True)

    def delete(self, e) -> None:
        self._move(e, False)


class RandomPairs:
    """Toggle pool over all vertex pairs, sampling absent pairs by rejection."""

    def __init__(self, n: int, rng: random.Random):
        self.n, self.rng = n, rng
        self.present: list[tuple[int, int]] = []
        self._index: dict[tuple[int, int], int] = {}

    @property
    def absent(self) -> bool:
        return len(self.present) < self.n * (self.n - 1) // 2

    def pick_absent(self):
        if not self.absent:
            return None
        rng = self.rng
        while True:
            u, v = rng.randrange(self.n), rng.randrange(self.n)
            if u != v:
                e = (min(u, v), max(u, v))
                if e not in self._index:
                    return e

    def pick_present(self):
        return self.rng.choice(self.present) if self.present else None

    def insert(self, e) -> None:
        self._index[e] = len(self.present)
        self.present.append(e)

    def delete(self, e) -> None:
        i = self._index.pop(e)
        last = self.present.pop()
        if last != e:
            self.present[i] = last
            self._index[last] = i


def _grid_candidates(n: int) -> list[tuple[int, int]]:
    side = max(1, math.ceil(math.sqrt(n)))
    out = []
    for v in range(n):
        r, c = divmod(v, side)
        right, down, diag = v + 1, v + side, v + side + 1
        if c + 1 < side and right < n:
            out.append((v, right))
        if down < n:
            out.append((v, down))
        if c + 1 < side and diag < n:
            out.append((v, diag))
    return out


def _star_candidates(n: int, hubs: int, spokes: int, rng: random.Random) -> list[tuple[int, int]]:
    out = []
    for v in range(hubs, n):
        for h in rng.sample(range(hubs), min(spokes, hubs)):
            out.append((h, v))
        w = hubs + (v - hubs + 1) % (n - hubs)
        if w != v:
            out.append((v, w))
    return out


def _clique_candidates(k: int, blocks: int) -> list[tuple[int, int]]:
    out = []
    for b in range(blocks):
        base = b * k
        out.extend((base + i, base + j) for i in range(k) for j in range(i + 1, k))
    return out


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise BadParams(msg)


def gen_workload(
    kind: str,
    n: int,
    seed: int = 0,
    m: Optional[int] = None,
    updates: int = 0,
    queries: int = 0,
    validate_every: int = 0,
    final_validate: bool = True,
    total_updates: bool = False,
    **params,
) -> list[str]:
    """Lines of a stream (without trailing newlines).

    ``m`` edges are inserted first (for ``gnm``; the other kinds insert
    ``fill`` of their candidate edges, or all clique edges), then ``updates``
    churn updates follow.  Churn inserts or deletes with equal odds, nudged
    towards the initial density for the candidate-based kinds.
    With ``total_updates`` the initial insertions count towards ``updates``.
    ``queries`` random ``? v`` lines are spread over the whole stream.
    """
    _check(kind in KINDS, f"unknown workload kind {kind!r}")
    _check(n >= 1, "n must be positive")
    _check(updates >= 0 and queries >= 0 and validate_every >= 0, "counts must be non-negative")
    rng = random.Random(f"{kind}:{n}:{seed}")
    initial: list[tuple[int, int]]
    if kind == "gnm":
        m = 0 if m is None else m
        _check(0 <= m <= n * (n - 1) // 2, f"m={m} out of range for n={n}")
        _check(not params, f"unexpected params {sorted(params)}")
        pool = RandomPairs(n, rng)
        initial = []
        for _ in range(m):
            e = pool.pick_absent()
            pool.insert(e)
            initial.append(e)
    else:
        if kind == "planar-like":
            fill = params.pop("fill", 0.8)
            cands = _grid_candidates(n)
        elif kind == "star-burst":
            fill = params.pop("fill", 1.0)
            hubs = params.pop("hubs", 8)
            spokes = params.pop("spokes", 3)
            _check(1 <= hubs < n, "need 1 <= hubs < n")
            _check(spokes >= 1, "spokes must be positive")
            cands = _star_candidates(n, hubs, spokes, rng)
        else:
            fill = 1.0
            k = params.pop("k", 20)
            blocks = params.pop("blocks", 5)
            background = params.pop("background", 0)
            _check(k >= 2 and blocks >= 1 and k * blocks <= n, "need k >= 2, blocks >= 1, k*blocks <= n")
            cands = _clique_candidates(k, blocks)
            if background:
                # sparse random edges among all vertices
                extra = set(cands)
                _check(background <= n * (n - 1) // 2 - len(extra), "background too large")
                while len(extra) < len(cands) + background:
                    u, v = rng.randrange(n), rng.randrange(n)
                    if u != v:
                        extra.add((min(u, v), max(u, v)))
                cands = cands + sorted(extra.difference(cands))
        _check(not params, f"unexpected params {sorted(params)}")
        _check(0 <= fill <= 1, "fill must lie in [0, 1]")
        if m is not None:
            _check(0 <= m <= len(cands), f"m={m} exceeds the {len(cands)} candidate edges")
        pool = EdgePool(cands, rng)
        order = list(pool.absent)
        rng.shuffle(order)
        initial = order[: (round(fill * len(order)) if m is None else m)]
        for e in initial:
            pool.insert(e)
    ups = [("+", e) for e in initial]
    churn = max(0, updates - len(initial)) if total_updates else updates
    for _ in range(churn):
        if kind == "gnm":
            ins = rng.random() < 0.5
        else:
            # drift back towards the initial density
            frac = len(pool.present) / max(1, len(pool.present) + len(pool.absent))
            ins = rng.random() < 0.5 + (fill - frac)
        e = pool.pick_absent() if ins else pool.pick_present()
        if e is None:
            ins = not ins
            e = pool.pick_absent() if ins else pool.pick_present()
            if e is None:
                break
        (pool.insert if ins else pool.delete)(e)
        ups.append(("+" if ins else "-", e))
    total = len(ups) + queries
    query_slots = set(rng.sample(range(total), queries)) if queries else set()
    lines = [f"n {n}"]
    it: Iterator = iter(ups)
    for pos in range(total):
        if pos in query_slots:
            lines.append(f"? {rng.randrange(n)}")
        else:
            op, (u, v) = next(it)
            lines.append(f"{op} {u} {v}")
        if validate_every and (pos + 1) % validate_every == 0:
            lines.append("!")
    if final_validate and lines[-1] != "!":
        lines.append("!")
    return lines


def write_stream(lines: list[str], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def acceptance_workloads(n: int = 10**4, updates: int = 10**5, validate_every: int = 10**3) -> list[dict]:
    """The twenty workload configurations of the propriety run."""
    out = []
    for s, m in enumerate((10_000, 20_000, 30_000, 40_000, 20_000, 20_000, 30_000, 10_000)):
        out.append(dict(kind="gnm", n=n, seed=s, m=m))
    for s in range(4):
        out.append(dict(kind="planar-like", n=n, seed=s, fill=0.6 + 0.1 * s))
    for s in range(4):
        out.append(dict(kind="star-burst", n=n, seed=s, hubs=8 + 8 * s, spokes=2 + s % 2))
    for s in range(4):
        out.append(dict(kind="clique-blocks", n=n, seed=s, k=32, blocks=5 + 5 * s, background=10_000))
    for cfg in out:
        cfg.update(updates=updates, total_updates=True, queries=updates // 100, validate_every=validate_every)
    return out
