from __future__ import annotations

from typing import Optional

from ..orientation import Orientation
from .base import Engine
from .det import DeterministicColouring
from .rand_better import RandBetterColouring, default_base_threshold, defective_params
from .rand_simple import RandSimpleColouring, simple_palette_bound

ENGINES = ("det", "rand-simple", "rand-better")
INNER_ENGINES = ENGINES + ("auto-min",)


def better_palette_bound(d: int, delta: float, base_threshold: int) -> int:
    if d < base_threshold:
        return simple_palette_bound(d)
    par = defective_params(d, delta)
    return par.palette_size * simple_palette_bound(par.class_degree) + 3 * d + 1


def resolve_auto(d: int, delta: float, base_threshold: int) -> str:
    """The randomised engine with the smaller palette at out-degree ``d``."""
    if better_palette_bound(d, delta, base_threshold) < simple_palette_bound(d):
        return "rand-better"
    return "rand-simple"


def make_engine(
    name: str,
    orientation: Orientation,
    seed: int = 0,
    delta: float = 3,
    base_threshold: Optional[int] = None,
) -> Engine:
    if name == "auto-min":
        bt = default_base_threshold(orientation.n) if base_threshold is None else base_threshold
        name = resolve_auto(orientation.dmax, delta, bt)
    if name == "det":
        return DeterministicColouring(orientation)
    if name == "rand-simple":
        return RandSimpleColouring(orientation, seed=seed)
    if name == "rand-better":
        return RandBetterColouring(orientation, seed=seed, delta=delta, base_threshold=base_threshold)
    raise ValueError(f"unknown engine {name!r}")


__all__ = [
    "ENGINES",
    "INNER_ENGINES",
    "Engine",
    "DeterministicColouring",
    "RandSimpleColouring",
    "RandBetterColouring",
    "better_palette_bound",
    "make_engine",
    "resolve_auto",
]
