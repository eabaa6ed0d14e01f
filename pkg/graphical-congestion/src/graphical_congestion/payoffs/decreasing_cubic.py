from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Dict

from ..errors import InvalidGameError
from ..interfaces import Number


@dataclass(frozen=True)
class DecreasingCubic:
    """f(x) = -(a + b x + c x^2 + d x^3) with strictly positive coefficients.

    This is the heterogeneous payoff family of the random-game experiments:
    positive coefficients make f strictly decreasing on [0, inf).
    """

    a: float
    b: float
    c: float
    d: float

    variant: ClassVar[str] = "DecreasingCubic"

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            value = float(getattr(self, name))
            if not value > 0:
                raise InvalidGameError(f"DecreasingCubic coefficient {name}={value} must be positive")
            object.__setattr__(self, name, value)

    def __call__(self, x: Number) -> Number:
        # Horner form
        return -(self.a + x * (self.b + x * (self.c + x * self.d)))

    def params(self) -> Dict[str, float]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}
