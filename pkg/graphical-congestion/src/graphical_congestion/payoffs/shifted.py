from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from ..interfaces import Number, PayoffFunction


@dataclass(frozen=True)
class Shifted:
    """g(x) = f(x + shift): f seen by a player that already carries ``shift`` congestion.

    Used by the directed-tree solver when a removed leaf sits on the same
    resource as its neighbour. Shifting keeps f strictly decreasing.
    """

    base: PayoffFunction
    shift: float

    @property
    def variant(self) -> str:
        return f"Shifted[{self.base.variant}]"

    def __call__(self, x: Number) -> Number:
        return self.base(x + self.shift)

    def params(self) -> Dict[str, float]:
        out = {"shift": float(self.shift)}
        out.update({f"base.{k}": v for k, v in self.base.params().items()})
        return out
