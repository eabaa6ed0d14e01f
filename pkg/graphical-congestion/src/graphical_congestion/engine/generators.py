"""Random and structured instance factories.

Every generator takes a numpy ``Generator`` and consumes it in a fixed
order, so one seed always reproduces the same instance. Off-diagonal
weights are drawn in row-major order over the upper triangle (mirrored for
undirected matrices) or over all off-diagonal cells (directed).
"""

from __future__ import annotations

from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..errors import InvalidGameError
from ..interfaces import Game, PayoffFunction, SpatialMatrix
from ..payoffs.decreasing_cubic import DecreasingCubic
from ..payoffs.neg_linear import NegLinear
from ..payoffs.reciprocal import Reciprocal

PayoffTable = Dict[Tuple[int, int], PayoffFunction]
Availability = Sequence[Sequence[int]]


def _full_availability(n_players: int, n_resources: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(range(1, n_resources + 1)) for _ in range(n_players))


def _check_size(n_players: int) -> None:
    if n_players < 1:
        raise InvalidGameError(f"Need at least one player, got {n_players}")


def _mirror_upper(n_players: int, values: np.ndarray) -> np.ndarray:
    w = np.zeros((n_players, n_players))
    rows, cols = np.triu_indices(n_players, k=1)
    w[rows, cols] = values
    w[cols, rows] = values
    return w


# ---------------------------------------------------------------------------
# Spatial matrices
# ---------------------------------------------------------------------------

def gen_undirected_uniform(n_players: int, rng: np.random.Generator) -> SpatialMatrix:
    """Erdos-Renyi style: every pair linked with weight 1 with probability 1/2."""
    _check_size(n_players)
    pairs = n_players * (n_players - 1) // 2
    return SpatialMatrix(_mirror_upper(n_players, rng.integers(0, 2, size=pairs).astype(float)))


def gen_undirected_weighted(n_players: int, rng: np.random.Generator) -> SpatialMatrix:
    _check_size(n_players)
    pairs = n_players * (n_players - 1) // 2
    return SpatialMatrix(_mirror_upper(n_players, rng.random(pairs)))


def gen_directed_weighted(n_players: int, rng: np.random.Generator) -> SpatialMatrix:
    _check_size(n_players)
    w = np.zeros((n_players, n_players))
    off_diagonal = ~np.eye(n_players, dtype=bool)
    w[off_diagonal] = rng.random(n_players * (n_players - 1))
    return SpatialMatrix(w)


def gen_random_directed_tree(n_players: int, rng: np.random.Generator) -> SpatialMatrix:
    """Random Pruefer tree; each edge gets a random direction and a weight in (0, 1]."""
    _check_size(n_players)
    w = np.zeros((n_players, n_players))
    if n_players == 1:
        return SpatialMatrix(w)
    sequence = rng.integers(0, n_players, size=n_players - 2).tolist()
    tree = nx.from_prufer_sequence(sequence)
    for u, v in sorted(tuple(sorted(edge)) for edge in tree.edges):
        src, dst = (u, v) if rng.random() < 0.5 else (v, u)
        w[src, dst] = 1.0 - rng.random()
    return SpatialMatrix(w)


def gen_random_dag(n_players: int, edge_prob: float, rng: np.random.Generator) -> SpatialMatrix:
    """Forward edges along a random permutation, each present with ``edge_prob``."""
    _check_size(n_players)
    if not 0.0 <= edge_prob <= 1.0:
        raise InvalidGameError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    order = rng.permutation(n_players)
    w = np.zeros((n_players, n_players))
    for i in range(n_players):
        for j in range(i + 1, n_players):
            if rng.random() < edge_prob:
                w[order[i], order[j]] = 1.0 - rng.random()
    return SpatialMatrix(w)


# ---------------------------------------------------------------------------
# Payoffs and availability
# ---------------------------------------------------------------------------

def gen_availability(
    n_players: int,
    n_resources: int,
    rng: np.random.Generator,
    min_resources: int = 1,
) -> Tuple[Tuple[int, ...], ...]:
    """Random per-player resource subsets of at least ``min_resources`` resources."""
    if not 1 <= min_resources <= n_resources:
        raise InvalidGameError(f"min_resources must lie in [1, {n_resources}], got {min_resources}")
    sets = []
    for _ in range(n_players):
        size = int(rng.integers(min_resources, n_resources + 1))
        picked = rng.choice(n_resources, size=size, replace=False) + 1
        sets.append(tuple(sorted(int(r) for r in picked)))
    return tuple(sets)


def gen_heterogeneous_payoffs(
    n_players: int,
    n_resources: int,
    rng: np.random.Generator,
    available: Optional[Availability] = None,
) -> PayoffTable:
    """Independent cubic -(a + bx + cx^2 + dx^3) per (player, resource)."""
    available = available if available is not None else _full_availability(n_players, n_resources)
    table: PayoffTable = {}
    for n, rs in enumerate(available):
        for r in rs:
            # 1 - U[0, 1) keeps every coefficient strictly positive
            a, b, c, d = (1.0 - rng.random(4)).tolist()
            table[(n, r)] = DecreasingCubic(a, b, c, d)
    return table


def gen_homogeneous_payoffs(
    n_players: int,
    n_resources: int,
    available: Optional[Availability] = None,
) -> PayoffTable:
    available = available if available is not None else _full_availability(n_players, n_resources)
    return {(n, r): Reciprocal() for n, rs in enumerate(available) for r in rs}


def assemble_game(
    spatial: SpatialMatrix,
    n_resources: int,
    payoffs: PayoffTable,
    available: Optional[Availability] = None,
) -> Game:
    available = available if available is not None else _full_availability(spatial.n_players, n_resources)
    return Game(spatial, n_resources, tuple(tuple(rs) for rs in available), payoffs)


# ---------------------------------------------------------------------------
# Structured games
# ---------------------------------------------------------------------------

def gen_odd_directed_cycle(
    n_vertices: int,
    weights: Union[float, Sequence[float]] = 1.0,
    n_resources: int = 2,
) -> Game:
    """Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with ``-x`` payoffs."""
    if n_vertices < 3 or n_vertices % 2 == 0:
        raise InvalidGameError(f"Cycle length must be odd and at least 3, got {n_vertices}")
    values = np.broadcast_to(np.asarray(weights, dtype=float), (n_vertices,))
    if np.any(values <= 0):
        raise InvalidGameError("Cycle weights must be positive")
    edges = {(i, (i + 1) % n_vertices): float(values[i]) for i in range(n_vertices)}
    spatial = SpatialMatrix.from_edges(n_vertices, edges)
    return Game.build(spatial, n_resources, lambda n, r: NegLinear())


# ---------------------------------------------------------------------------
# Lookup tables for the experiment harness
# ---------------------------------------------------------------------------

SPATIAL_GENERATORS: Dict[str, Callable[[int, np.random.Generator], SpatialMatrix]] = {
    "undirected-uniform": gen_undirected_uniform,
    "undirected-weighted": gen_undirected_weighted,
    "directed-weighted": gen_directed_weighted,
    "directed-tree": gen_random_directed_tree,
}

PAYOFF_FAMILIES = ("heterogeneous", "homogeneous")


def random_game(
    n_players: int,
    n_resources: int,
    spatial_generator: str,
    payoff_family: str,
    rng: np.random.Generator,
    available: Optional[Availability] = None,
) -> Game:
    """Spatial matrix first, then payoffs, from the same generator."""
    if spatial_generator not in SPATIAL_GENERATORS:
        raise InvalidGameError(
            f"Unknown spatial generator: {spatial_generator}. Available: {list(SPATIAL_GENERATORS)}"
        )
    if payoff_family not in PAYOFF_FAMILIES:
        raise InvalidGameError(f"Unknown payoff family: {payoff_family}. Available: {list(PAYOFF_FAMILIES)}")
    spatial = SPATIAL_GENERATORS[spatial_generator](n_players, rng)
    if payoff_family == "heterogeneous":
        payoffs = gen_heterogeneous_payoffs(n_players, n_resources, rng, available)
    else:
        payoffs = gen_homogeneous_payoffs(n_players, n_resources, available)
    return assemble_game(spatial, n_resources, payoffs, available)
