"""Shared fixtures: the small hand-made games used across the test suite."""

import sys
from pathlib import Path

# run from a checkout without installing the package
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "graphical-congestion" / "src"))

import numpy as np
import pytest

from graphical_congestion.interfaces import Game, SpatialMatrix
from graphical_congestion.payoffs import NegLinear
from graphical_congestion.serialization import load_game

FIXTURES = Path(__file__).parent / "fixtures"

# Four players; entry [m, n] is the congestion m causes n.
FOUR_PLAYER_MATRIX = [
    [0, 7, 0, 4],
    [0, 0, 9, 0],
    [0, 4, 0, 0],
    [0, 3, 1, 0],
]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical checks; deselect with -m 'not slow'")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def four_player_game() -> Game:
    return Game.build(SpatialMatrix(np.array(FOUR_PLAYER_MATRIX, dtype=float)), 2, lambda n, r: NegLinear())


@pytest.fixture
def triangle_game() -> Game:
    """Directed unit triangle 0 -> 1 -> 2 -> 0 on two resources: no equilibrium."""
    return load_game(FIXTURES / "triangle.json")


@pytest.fixture
def trap_game() -> Game:
    """Triangle plus a fourth player who congests player 0 heavily.

    Player 3 starts unhappy on resource 1 and moves once, for good. On
    resource 2 it pins player 0 to resource 1 and the game settles at
    (1, 2, 1, 2). On resource 3 it leaves the triangle alone, which then
    cycles forever.
    """
    return load_game(FIXTURES / "trap.json")


@pytest.fixture
def dag_game() -> Game:
    return load_game(FIXTURES / "dag.json")


@pytest.fixture
def tree_game() -> Game:
    return load_game(FIXTURES / "tree.json")
