"""Graph 3-colouring as a congestion game.

Vertices become players, edges unit mutual congestion, colours the three
resources, and every payoff is ``-x``. A proper colouring is exactly a state
of total payoff 0, so the best equilibrium answers the colouring question.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidGameError, InvalidStateError, NoPureNash
from ..interfaces import Game, SpatialMatrix, State
from ..payoffs.neg_linear import NegLinear
from .game import payoff_vector
from .statespace import find_all_pne

logger = logging.getLogger(__name__)

COLOURS = 3


def _check_adjacency(adjacency) -> np.ndarray:
    a = np.asarray(adjacency, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidGameError(f"Adjacency matrix must be square, got shape {a.shape}")
    if not np.isin(a, (0.0, 1.0)).all():
        raise InvalidGameError("Adjacency matrix entries must be 0 or 1")
    if not np.array_equal(a, a.T):
        raise InvalidGameError("Adjacency matrix must be symmetric")
    if np.any(np.diag(a) != 0):
        raise InvalidGameError("Adjacency matrix must have a zero diagonal")
    return a


def coloring_reduction(adjacency) -> Game:
    a = _check_adjacency(adjacency)
    return Game.build(SpatialMatrix(a), COLOURS, lambda n, r: NegLinear())


def _total_payoff(game: Game, state: State) -> float:
    total = 0.0
    for value in payoff_vector(game, state):
        total += float(value)
    return total


def optimal_pne_total_payoff(game: Game, cap: Optional[int] = None) -> Tuple[State, float]:
    """Equilibrium with the largest summed payoff; the earliest one on ties."""
    best: Optional[State] = None
    best_total = -np.inf
    for state in find_all_pne(game, cap):
        total = _total_payoff(game, state)
        if best is None or total > best_total:
            best, best_total = state, total
    if best is None:
        raise NoPureNash("The game has no pure Nash equilibrium")
    logger.debug("optimal equilibrium %s with total payoff %g", best.choices, best_total)
    return best, best_total


def is_proper_coloring(adjacency, state: State) -> bool:
    a = np.asarray(adjacency)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != len(state):
        raise InvalidStateError(f"State of length {len(state)} does not match adjacency of shape {a.shape}")
    src, dst = np.nonzero(a)
    return all(state[int(u)] != state[int(v)] for u, v in zip(src, dst))


def is_three_colorable(adjacency, cap: Optional[int] = None) -> bool:
    _, total = optimal_pne_total_payoff(coloring_reduction(adjacency), cap)
    return total == 0
