from .decreasing_cubic import DecreasingCubic
from .neg_linear import NegLinear
from .reciprocal import Reciprocal
from .registry import PAYOFF_VARIANTS, get_available_variants, payoff_from_params, register_payoff
from .shannon import Shannon
from .shifted import Shifted

__all__ = [
    "DecreasingCubic",
    "NegLinear",
    "Reciprocal",
    "Shannon",
    "Shifted",
    "PAYOFF_VARIANTS",
    "get_available_variants",
    "payoff_from_params",
    "register_payoff",
]
