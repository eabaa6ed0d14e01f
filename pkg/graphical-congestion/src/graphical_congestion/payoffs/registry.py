"""Variant-name lookup for payoff functions, used by the JSON game format."""

from __future__ import annotations

from typing import Any, Dict, Type

from ..errors import InvalidGameError
from ..interfaces import PayoffFunction
from .decreasing_cubic import DecreasingCubic
from .neg_linear import NegLinear
from .reciprocal import Reciprocal
from .shannon import Shannon

PAYOFF_VARIANTS: Dict[str, Type[Any]] = {
    NegLinear.variant: NegLinear,
    DecreasingCubic.variant: DecreasingCubic,
    Reciprocal.variant: Reciprocal,
    Shannon.variant: Shannon,
}


def register_payoff(cls: Type[Any]) -> Type[Any]:
    """Add a payoff class to the lookup table; usable as a decorator."""
    PAYOFF_VARIANTS[cls.variant] = cls
    return cls


def payoff_from_params(variant: str, params: Dict[str, float]) -> PayoffFunction:
    if variant not in PAYOFF_VARIANTS:
        raise InvalidGameError(f"Unknown payoff variant: {variant}. Available: {list(PAYOFF_VARIANTS.keys())}")
    try:
        return PAYOFF_VARIANTS[variant](**params)
    except TypeError as exc:
        raise InvalidGameError(f"Bad parameters for {variant}: {params}") from exc


def get_available_variants() -> list[str]:
    return list(PAYOFF_VARIANTS.keys())
