from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Dict

from ..interfaces import Number


@dataclass(frozen=True)
class NegLinear:
    """f(x) = -x. The payoff of the colouring reduction and the triangle examples."""

    variant: ClassVar[str] = "NegLinear"

    def __call__(self, x: Number) -> Number:
        return -x

    def params(self) -> Dict[str, float]:
        return {}
