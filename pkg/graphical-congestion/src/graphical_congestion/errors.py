"""Exception types raised by the congestion-game engine.

Everything derives from ``GameError`` which is a ``ValueError``, so callers
that only care about "bad input" can keep catching ``ValueError``.
"""

from __future__ import annotations

from typing import List, Sequence


class GameError(ValueError):
    """Base class for all engine errors."""


class InvalidGameError(GameError):
    pass


class InvalidStateError(GameError):
    pass


class ResourceUnavailableError(GameError):
    def __init__(self, player: int, resource: int) -> None:
        super().__init__(f"Resource {resource} is not available to player {player}")
        self.player = player
        self.resource = resource


class CycleDetected(GameError):
    """The congestion digraph has a directed cycle; ``cycle`` is a witness."""

    def __init__(self, cycle: Sequence[int]) -> None:
        self.cycle: List[int] = list(cycle)
        super().__init__(f"Directed cycle through players {self.cycle}")


class NotATree(GameError):
    pass


class NotTwoResourceGame(GameError):
    pass


class NotUndirectedError(GameError):
    pass


class NotHomogeneousError(GameError):
    pass


class NotPureNashError(GameError):
    pass


class NoPureNash(GameError):
    pass


class StateSpaceTooLarge(GameError):
    def __init__(self, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(f"State space has {count} states, above the cap of {cap}")


class WirelessPlacementError(GameError):
    pass


class ConfigError(GameError):
    pass
