from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Dict

import numpy as np

from ..interfaces import Number


@dataclass(frozen=True)
class Reciprocal:
    """f(x) = 1/x, with f(0) = +inf.

    Games made only of reciprocals are resource-homogeneous, so the engine
    compares congestion levels instead of these values and the infinity is
    never compared arithmetically on that path.
    """

    variant: ClassVar[str] = "Reciprocal"

    def __call__(self, x: Number) -> Number:
        with np.errstate(divide="ignore"):
            return np.divide(1.0, x)

    def params(self) -> Dict[str, float]:
        return {}
