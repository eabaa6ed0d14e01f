"""Constructive pure Nash equilibrium solvers.

``solve_dag`` lets players best-respond once each along a topological order:
later players never congest earlier ones, so nobody regrets their move.

``solve_directed_tree`` builds an equilibrium by induction on the tree:
remove the smallest-index leaf, solve the rest, add the leaf back at its best
response, and if that upsets its neighbour re-solve the rest with the
neighbour's payoff on the leaf's resource shifted by the leaf's weight.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Set, Tuple

import networkx as nx

from ..errors import CycleDetected, NotATree
from ..interfaces import Game, PayoffFunction, SpatialMatrix, State
from ..payoffs.neg_linear import NegLinear
from ..payoffs.shifted import Shifted
from .game import congestion_matrix, is_directed_forest

logger = logging.getLogger(__name__)

Overrides = Mapping[Tuple[int, int], PayoffFunction]


@dataclass(frozen=True)
class TopologicalOrder:
    order: Tuple[int, ...]

    def __iter__(self):
        return iter(self.order)

    def __len__(self) -> int:
        return len(self.order)


def topological_sort(spatial: SpatialMatrix) -> TopologicalOrder:
    """Lexicographically smallest topological order of D(S)."""
    graph = spatial.digraph()
    try:
        order = list(nx.lexicographical_topological_sort(graph))
    except nx.NetworkXUnfeasible:
        cycle = nx.find_cycle(graph)
        raise CycleDetected([int(u) for u, _ in cycle]) from None
    return TopologicalOrder(tuple(int(n) for n in order))


def best_response(game: Game, state: State, n: int) -> int:
    """Payoff-maximising resource for n; ties go to the smallest resource."""
    game.check_player(n)
    game.validate_state(state)
    cong = congestion_matrix(game, state)[:, n]
    best = game.available[n][0]
    if game.homogeneous:
        for r in game.available[n][1:]:
            if cong[r - 1] < cong[best - 1]:
                best = r
        return best
    best_value = game.payoff_of(n, best)(cong[best - 1])
    for r in game.available[n][1:]:
        value = game.payoff_of(n, r)(cong[r - 1])
        if value > best_value:
            best, best_value = r, value
    return best


def solve_dag(game: Game) -> State:
    order = topological_sort(game.spatial)
    state = game.initial_state()
    for n in order:
        state = state.with_choice(n, best_response(game, state, n))
    return state


# ---------------------------------------------------------------------------
# Directed trees (and forests)
# ---------------------------------------------------------------------------

def _payoff(game: Game, overrides: Overrides, v: int, r: int) -> PayoffFunction:
    fn = overrides.get((v, r))
    return fn if fn is not None else game.payoff_of(v, r)


def _partial_values(game: Game, assign: Mapping[int, int], v: int, overrides: Overrides) -> Dict[int, float]:
    """Payoff of v on each of its resources, counting only players in ``assign``."""
    weights = game.weights
    values = {}
    for r in game.available[v]:
        x = 0.0
        for m in sorted(assign):
            if m != v and assign[m] == r:
                x += float(weights[m, v])
        values[r] = _payoff(game, overrides, v, r)(x)
    return values


def _partial_best(game: Game, assign: Mapping[int, int], v: int, overrides: Overrides) -> int:
    values = _partial_values(game, assign, v, overrides)
    best = game.available[v][0]
    for r in game.available[v][1:]:
        if values[r] > values[best]:
            best = r
    return best


def _is_satisfied(game: Game, assign: Mapping[int, int], v: int, overrides: Overrides) -> bool:
    values = _partial_values(game, assign, v, overrides)
    current = values[assign[v]]
    return not any(value > current for value in values.values())


def _solve_subtree(
    game: Game,
    vertices: FrozenSet[int],
    adjacency: Mapping[int, Set[int]],
    overrides: Overrides,
) -> Dict[int, int]:
    if len(vertices) == 1:
        (v,) = vertices
        return {v: _partial_best(game, {}, v, overrides)}

    leaf = min(v for v in vertices if len(adjacency[v] & vertices) == 1)
    (neighbour,) = adjacency[leaf] & vertices
    rest = vertices - {leaf}

    assign = _solve_subtree(game, rest, adjacency, overrides)
    r = _partial_best(game, assign, leaf, overrides)
    assign[leaf] = r
    if _is_satisfied(game, assign, neighbour, overrides):
        return assign

    # the neighbour can only be upset if the leaf joined its resource r
    logger.debug("re-solving %d players: leaf %d joined neighbour %d on %d", len(rest), leaf, neighbour, r)
    shifted = dict(overrides)
    base = _payoff(game, overrides, neighbour, r)
    shifted[(neighbour, r)] = Shifted(base, float(game.weights[leaf, neighbour]))
    assign = _solve_subtree(game, rest, adjacency, shifted)
    assign[leaf] = r
    return assign


def solve_directed_tree(game: Game) -> State:
    """Pure Nash equilibrium of a game whose underlying graph is a tree.

    Forests are solved one component at a time since components do not
    interact. Cost is exponential in the worst case.
    """
    graph = game.spatial.underlying_graph()
    if not is_directed_forest(game.spatial):
        cycle = [int(u) for u, _ in nx.find_cycle(graph)]
        raise NotATree(f"The underlying undirected graph has a cycle through players {cycle}")
    # homogeneous games only care about congestion; -x compares it exactly
    working = game.with_payoffs({key: NegLinear() for key in game.payoffs}) if game.homogeneous else game
    adjacency = {v: set(graph.neighbors(v)) for v in graph.nodes}
    assign: Dict[int, int] = {}
    for component in sorted(nx.connected_components(graph), key=min):
        assign.update(_solve_subtree(working, frozenset(component), adjacency, {}))
    return State(tuple(assign[n] for n in range(game.n_players)))
