"""Per-state evaluations of a graphical congestion game.

All congestion sums run over the other players in ascending index order,
one addition at a time, so the single-state functions here and the batched
versions used by the state-space oracle produce bit-identical floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import networkx as nx
import numpy as np
import pandas as pd

from ..errors import NotHomogeneousError, NotPureNashError, ResourceUnavailableError
from ..interfaces import Game, SpatialMatrix, State, StructureReport

BOUND_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BoundCheck:
    player: int
    congestion: float
    bound: float
    satisfied: bool


# ---------------------------------------------------------------------------
# Congestion
# ---------------------------------------------------------------------------

def congestion_matrix(game: Game, state: State) -> np.ndarray:
    """(R, N) array: entry [r-1, n] is what n would feel on resource r."""
    weights = game.weights
    cong = np.zeros((game.n_resources, game.n_players))
    for m, r in enumerate(state):
        cong[r - 1] += weights[m]
    return cong


def batch_congestion(game: Game, states: np.ndarray) -> np.ndarray:
    """(K, R, N) congestion for a (K, N) block of states; same summation order as above."""
    weights = game.weights
    labels = np.arange(1, game.n_resources + 1)
    cong = np.zeros((states.shape[0], game.n_resources, game.n_players))
    for m in range(game.n_players):
        onehot = states[:, m][:, None] == labels[None, :]
        cong += onehot[:, :, None] * weights[m][None, None, :]
    return cong


def congestion_vector(game: Game, state: State) -> np.ndarray:
    cong = congestion_matrix(game, state)
    return cong[state.as_array() - 1, np.arange(game.n_players)]


def congestion_level(game: Game, state: State, n: int) -> float:
    game.check_player(n)
    game.validate_state(state)
    return float(congestion_matrix(game, state)[state[n] - 1, n])


def total_congestion(game: Game, state: State) -> float:
    game.validate_state(state)
    total = 0.0
    for c in congestion_vector(game, state):
        total += float(c)
    return total


# ---------------------------------------------------------------------------
# Payoffs and better responses
# ---------------------------------------------------------------------------

def payoff(game: Game, state: State, n: int) -> float:
    game.check_player(n)
    game.validate_state(state)
    x = float(congestion_matrix(game, state)[state[n] - 1, n])
    return float(game.payoff_of(n, state[n])(x))


def payoff_vector(game: Game, state: State) -> np.ndarray:
    game.validate_state(state)
    levels = congestion_vector(game, state)
    return np.array([float(game.payoff_of(n, r)(float(levels[n]))) for n, r in enumerate(state)])


def batch_improvement(game: Game, states: np.ndarray) -> np.ndarray:
    """(K, N, R) boolean: True where switching n to r is a better response."""
    by_player = batch_congestion(game, states).transpose(0, 2, 1)
    current = np.take_along_axis(by_player, (states - 1)[:, :, None], axis=2)
    if game.homogeneous:
        better = by_player < current
    else:
        values = np.full(by_player.shape, -np.inf)
        for (n, r), fn in game.payoffs.items():
            values[:, n, r - 1] = fn(by_player[:, n, r - 1])
        current_value = np.take_along_axis(values, (states - 1)[:, :, None], axis=2)
        better = values > current_value
    return better & game.availability_mask[None, :, :]


def improvement_mask(game: Game, state: State) -> np.ndarray:
    """(N, R) boolean better-response matrix of one state."""
    return batch_improvement(game, state.as_array()[None, :])[0]


def is_better_response(game: Game, state: State, n: int, r: int) -> bool:
    game.check_player(n)
    game.validate_state(state)
    if r not in game.available[n]:
        raise ResourceUnavailableError(n, r)
    cong = congestion_matrix(game, state)
    now, after = cong[state[n] - 1, n], cong[r - 1, n]
    if game.homogeneous:
        return bool(after < now)
    return bool(game.payoff_of(n, r)(after) > game.payoff_of(n, state[n])(now))


def better_response_set(game: Game, state: State, n: int) -> List[int]:
    """Better responses of n, ascending."""
    game.check_player(n)
    game.validate_state(state)
    row = improvement_mask(game, state)[n]
    return [int(r) + 1 for r in np.flatnonzero(row)]


def is_pure_nash(game: Game, state: State) -> bool:
    game.validate_state(state)
    return not bool(improvement_mask(game, state).any())


def is_resource_homogeneous(game: Game) -> bool:
    return game.homogeneous


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

def classify_structure(spatial: SpatialMatrix) -> StructureReport:
    return StructureReport(
        is_undirected=spatial.is_symmetric(),
        is_dag=nx.is_directed_acyclic_graph(spatial.digraph()),
        is_directed_tree=nx.is_tree(spatial.underlying_graph()),
    )


def is_directed_forest(spatial: SpatialMatrix) -> bool:
    return nx.is_forest(spatial.underlying_graph())


# ---------------------------------------------------------------------------
# Equilibrium congestion bound (homogeneous games)
# ---------------------------------------------------------------------------

def check_equilibrium_congestion_bound(game: Game, state: State) -> List[BoundCheck]:
    """At a pure Nash equilibrium of a homogeneous game each player's congestion
    is at most its total incoming weight divided by its number of resources."""
    if not game.homogeneous:
        raise NotHomogeneousError("The congestion bound needs a resource-homogeneous game")
    if not is_pure_nash(game, state):
        raise NotPureNashError(f"State {state.choices} is not a pure Nash equilibrium")
    levels = congestion_vector(game, state)
    report = []
    for n in range(game.n_players):
        bound = game.spatial.in_weight(n) / len(game.available[n])
        level = float(levels[n])
        report.append(BoundCheck(n, level, bound, level <= bound + BOUND_TOLERANCE))
    return report


def state_report(game: Game, state: State) -> pd.DataFrame:
    """Per-player resource, congestion, payoff and number of better responses."""
    game.validate_state(state)
    levels = congestion_vector(game, state)
    values = payoff_vector(game, state)
    mask = improvement_mask(game, state)
    return pd.DataFrame(
        {
            "player": np.arange(game.n_players),
            "resource": state.as_array(),
            "congestion": levels,
            "payoff": values,
            "better_responses": mask.sum(axis=1),
        }
    )
