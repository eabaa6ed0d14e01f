"""
Tests for the 3-colouring reduction.
"""

from typing import Dict, List

import networkx as nx
import numpy as np
import pytest

from graphical_congestion.errors import InvalidGameError, InvalidStateError, NoPureNash
from graphical_congestion.interfaces import State
from graphical_congestion.engine.game import is_pure_nash
from graphical_congestion.engine.reduction import (
    coloring_reduction,
    is_proper_coloring,
    is_three_colorable,
    optimal_pne_total_payoff,
)


def adjacency(graph: nx.Graph) -> np.ndarray:
    return nx.to_numpy_array(graph, nodelist=sorted(graph.nodes))


def colourable_by_backtracking(graph: nx.Graph, colours: int = 3) -> bool:
    order: List[int] = sorted(graph.nodes)
    assigned: Dict[int, int] = {}

    def place(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for c in range(colours):
            if all(assigned.get(u) != c for u in graph.neighbors(v)):
                assigned[v] = c
                if place(i + 1):
                    return True
                del assigned[v]
        return False

    return place(0)


# ============================================================
# Construction
# ============================================================

class TestColoringReduction:
    def test_triangle(self):
        game = coloring_reduction(adjacency(nx.complete_graph(3)))
        assert game.n_players == 3
        assert game.n_resources == 3
        assert game.homogeneous
        assert game.spatial.is_symmetric()

    @pytest.mark.parametrize(
        "matrix, match",
        [
            ([[0, 1, 0], [1, 0, 1]], "square"),
            ([[0, 2], [2, 0]], "0 or 1"),
            ([[0, 1], [0, 0]], "symmetric"),
            ([[1, 0], [0, 0]], "diagonal"),
        ],
    )
    def test_rejects_bad_adjacency(self, matrix, match):
        with pytest.raises(InvalidGameError, match=match):
            coloring_reduction(matrix)


# ============================================================
# Optimal equilibrium
# ============================================================

class TestOptimalPne:
    @pytest.mark.parametrize("graph", [nx.path_graph(4), nx.cycle_graph(5), nx.petersen_graph()])
    def test_colourable_graphs_reach_zero(self, graph):
        state, total = optimal_pne_total_payoff(coloring_reduction(adjacency(graph)))
        assert total == 0
        assert is_proper_coloring(adjacency(graph), state)

    def test_k4_is_negative(self):
        game = coloring_reduction(adjacency(nx.complete_graph(4)))
        state, total = optimal_pne_total_payoff(game)
        assert total < 0
        assert is_pure_nash(game, state)
        assert not is_three_colorable(adjacency(nx.complete_graph(4)))

    def test_ties_go_to_the_first_equilibrium(self):
        game = coloring_reduction(adjacency(nx.path_graph(2)))
        state, _ = optimal_pne_total_payoff(game)
        assert state == State((2, 1))

    def test_no_equilibrium(self, triangle_game):
        with pytest.raises(NoPureNash):
            optimal_pne_total_payoff(triangle_game)

    def test_matches_backtracking_on_small_connected_graphs(self):
        graphs = [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= 6 and nx.is_connected(g)]
        assert len(graphs) > 100
        for graph in graphs:
            assert is_three_colorable(adjacency(graph)) == colourable_by_backtracking(graph)


# ============================================================
# is_proper_coloring
# ============================================================

class TestIsProperColoring:
    def test_cycle(self):
        a = adjacency(nx.cycle_graph(3))
        assert is_proper_coloring(a, State((1, 2, 3)))
        assert not is_proper_coloring(a, State((1, 2, 1)))

    def test_no_edges(self):
        assert is_proper_coloring(np.zeros((3, 3)), State((1, 1, 1)))

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidStateError):
            is_proper_coloring(np.zeros((3, 3)), State((1, 1)))
