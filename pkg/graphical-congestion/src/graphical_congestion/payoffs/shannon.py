from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Dict

import numpy as np

from ..errors import InvalidGameError
from ..interfaces import Number


@dataclass(frozen=True)
class Shannon:
    """Shannon rate of a link under interference x (bits/s).

    f(x) = B * log2(1 + p / (tau0 * B + x)) where ``bandwidth`` B is in Hz,
    ``signal`` p = h_nn * P_n is the received power in mW and
    ``noise_density`` tau0 is in mW/Hz.
    """

    bandwidth: float
    signal: float
    noise_density: float

    variant: ClassVar[str] = "Shannon"

    def __post_init__(self) -> None:
        for name in ("bandwidth", "signal", "noise_density"):
            value = float(getattr(self, name))
            if not value > 0:
                raise InvalidGameError(f"Shannon parameter {name}={value} must be positive")
            object.__setattr__(self, name, value)

    def __call__(self, x: Number) -> Number:
        noise = self.noise_density * self.bandwidth
        return self.bandwidth * np.log2(1.0 + self.signal / (noise + x))

    def params(self) -> Dict[str, float]:
        return {
            "bandwidth": self.bandwidth,
            "signal": self.signal,
            "noise_density": self.noise_density,
        }
