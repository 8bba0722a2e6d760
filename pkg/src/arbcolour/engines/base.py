from __future__ import annotations

import numpy as np

from ..graph import VertexOutOfRange
from ..labels import ColourLabel
from ..orientation import Orientation


class Engine:
    """Common plumbing for query engines over one orientation.

    All memoised state is dropped whenever the orientation version moves.
    """

    name = "engine"

    def __init__(self, orientation: Orientation):
        if not getattr(orientation, "acyclic", True):
            # slot forests and the residual recursion both need an order
            raise ValueError(f"{self.name} needs an acyclic orientation")
        self.orientation = orientation
        self._version = -1

    def _sync(self) -> None:
        if self._version != self.orientation.version:
            self._version = self.orientation.version
            self._reset()

    def _reset(self) -> None:
        pass

    def reset_cache(self) -> None:
        self._version = -1

    def _check(self, v: int) -> None:
        if not 0 <= v < self.orientation.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {self.orientation.n})")

    def label(self, v: int) -> ColourLabel:
        raise NotImplementedError

    def colour(self, v: int) -> int:
        return self.label(v).value

    def colour_all(self) -> np.ndarray:
        return np.array([self.colour(v) for v in range(self.orientation.n)], dtype=np.int64)

    def palette_bound(self) -> int:
        raise NotImplementedError
