from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class ColourLabel:
    """Structured colour with its canonical flattening ``value``.

    ``path`` lists the palette blocks the colour was drawn from, outermost
    first, e.g. ``(("class", 3), ("simple", None))``.  ``residual`` is set
    when the leaf colour came from a greedy residual block.
    """

    engine: str
    value: int
    leaf: int
    path: tuple = ()
    part: Optional[tuple[int, int]] = None
    residual: bool = False

    def describe(self) -> str:
        steps = []
        if self.part is not None:
            steps.append(f"scale={self.part[0]}/part={self.part[1]}")
        for kind, arg in self.path:
            steps.append(kind if arg is None else f"{kind}={arg}")
        steps.append(f"leaf={self.leaf}")
        return f"{self.engine}:" + "/".join(steps)
