"""Exhaustive analysis of small games.

States are enumerated in mixed-radix order over each player's available
resources, player 0 varying fastest. Every state is identified by its
position in that order, so the transition graph stores plain integers.
Better responses are evaluated in blocks with ``batch_improvement``, the
same routine behind ``is_pure_nash`` and the dynamics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..errors import NotHomogeneousError, StateSpaceTooLarge
from ..interfaces import Game, State
from .dynamics import DEFAULT_MAX_SLOTS, RunOutcome, UpdateRule, run
from .game import batch_congestion, batch_improvement

logger = logging.getLogger(__name__)

STATE_COUNT_CAP = 10**6
BLOCK_SIZE = 4096


def state_count(game: Game) -> int:
    count = 1
    for rs in game.available:
        count *= len(rs)
    return count


def _check_cap(game: Game, cap: Optional[int]) -> int:
    count = state_count(game)
    limit = STATE_COUNT_CAP if cap is None else cap
    if count > limit:
        raise StateSpaceTooLarge(count, limit)
    return count


def _strides(game: Game) -> np.ndarray:
    radices = [len(rs) for rs in game.available]
    strides = np.ones(game.n_players, dtype=np.int64)
    for n in range(1, game.n_players):
        strides[n] = strides[n - 1] * radices[n - 1]
    return strides


def _states_between(game: Game, start: int, stop: int) -> np.ndarray:
    """(stop - start, N) block of states by enumeration position."""
    positions = np.arange(start, stop, dtype=np.int64)
    block = np.empty((stop - start, game.n_players), dtype=np.int64)
    for n, stride in enumerate(_strides(game)):
        rs = np.asarray(game.available[n], dtype=np.int64)
        block[:, n] = rs[(positions // stride) % rs.size]
    return block


def _blocks(game: Game, count: int) -> Iterable[Tuple[int, np.ndarray]]:
    for start in range(0, count, BLOCK_SIZE):
        yield start, _states_between(game, start, min(start + BLOCK_SIZE, count))


def state_array(game: Game, cap: Optional[int] = None) -> np.ndarray:
    """All states as a (K, N) integer array in enumeration order."""
    count = _check_cap(game, cap)
    return _states_between(game, 0, count)


def enumerate_states(game: Game, cap: Optional[int] = None) -> List[State]:
    return [State(tuple(row)) for row in state_array(game, cap).tolist()]


def state_index(game: Game, state: State) -> int:
    """Position of ``state`` in enumeration order."""
    game.validate_state(state)
    index = 0
    for n, stride in enumerate(_strides(game)):
        index += game.available[n].index(state[n]) * int(stride)
    return index


def find_all_pne(game: Game, cap: Optional[int] = None) -> List[State]:
    count = _check_cap(game, cap)
    found: List[State] = []
    for _, block in _blocks(game, count):
        stuck = ~batch_improvement(game, block).any(axis=(1, 2))
        found.extend(State(tuple(row)) for row in block[stuck].tolist())
    logger.info("found %d pure Nash equilibria among %d states", len(found), count)
    return found


# ---------------------------------------------------------------------------
# Transition graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Better-response transitions between all states of a game.

    ``edges`` rows are ``[source, target, player, resource]``; sources and
    targets index ``states``.
    """

    states: np.ndarray
    edges: np.ndarray
    pne_indices: np.ndarray

    @property
    def n_states(self) -> int:
        return int(self.states.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def state(self, index: int) -> State:
        return State(tuple(self.states[index].tolist()))

    def to_networkx(self) -> nx.DiGraph:
        pne = set(self.pne_indices.tolist())
        g = nx.DiGraph()
        for i, row in enumerate(self.states.tolist()):
            g.add_node(i, choices=tuple(row), pne=i in pne)
        for src, dst, player, resource in self.edges.tolist():
            g.add_edge(src, dst, player=player, resource=resource)
        return g


def build_transition_graph(game: Game, cap: Optional[int] = None) -> TransitionGraph:
    count = _check_cap(game, cap)
    strides = _strides(game)
    # digit[n, r - 1]: position of resource r in player n's available list
    digit = np.full((game.n_players, game.n_resources), -1, dtype=np.int64)
    for n, rs in enumerate(game.available):
        digit[n, [r - 1 for r in rs]] = np.arange(len(rs))

    edge_blocks = []
    pne_blocks = []
    for start, block in _blocks(game, count):
        better = batch_improvement(game, block)
        rows, players, cols = np.nonzero(better)
        current = block[rows, players] - 1
        src = start + rows
        dst = src + (digit[players, cols] - digit[players, current]) * strides[players]
        edge_blocks.append(np.column_stack([src, dst, players, cols + 1]).astype(np.int64))
        pne_blocks.append(start + np.flatnonzero(~better.any(axis=(1, 2))))

    edges = np.concatenate(edge_blocks) if edge_blocks else np.empty((0, 4), dtype=np.int64)
    pne = np.concatenate(pne_blocks).astype(np.int64) if pne_blocks else np.empty(0, dtype=np.int64)
    logger.info("transition graph: %d states, %d edges, %d sinks", count, edges.shape[0], pne.size)
    return TransitionGraph(_states_between(game, 0, count), edges, pne)


def has_fip(game: Game, cap: Optional[int] = None, graph: Optional[TransitionGraph] = None) -> bool:
    """Finite improvement property: no better-response cycle anywhere."""
    graph = graph if graph is not None else build_transition_graph(game, cap)
    return nx.is_directed_acyclic_graph(graph.to_networkx())


# ---------------------------------------------------------------------------
# Reachability and traps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReachabilityReport:
    initial: int
    pne_reachable: bool
    reachable_pne: Tuple[int, ...]
    trap: Optional[FrozenSet[int]]

    @property
    def has_trap(self) -> bool:
        return self.trap is not None


def reachability_analysis(
    game: Game,
    initial: State,
    cap: Optional[int] = None,
    graph: Optional[TransitionGraph] = None,
) -> ReachabilityReport:
    """Which equilibria can be reached from ``initial``, and where dynamics can get stuck.

    The trap is the union of the reachable terminal strongly connected
    components holding two or more states: once there, no equilibrium can
    ever be reached.
    """
    graph = graph if graph is not None else build_transition_graph(game, cap)
    g = graph.to_networkx()
    source = state_index(game, initial)
    reachable = nx.descendants(g, source) | {source}
    pne = set(graph.pne_indices.tolist())
    reachable_pne = tuple(sorted(reachable & pne))

    condensed = nx.condensation(g.subgraph(reachable))
    trapped = set()
    for component in condensed.nodes:
        members = condensed.nodes[component]["members"]
        if condensed.out_degree(component) == 0 and len(members) > 1:
            trapped.update(members)
    return ReachabilityReport(
        initial=source,
        pne_reachable=bool(reachable_pne),
        reachable_pne=reachable_pne,
        trap=frozenset(trapped) if trapped else None,
    )


def transition_graph_fragment(graph: TransitionGraph, initial: int, depth: int) -> nx.DiGraph:
    """States within ``depth`` better-response hops of ``initial``, with their edges."""
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    g = graph.to_networkx()
    near = nx.single_source_shortest_path_length(g, initial, cutoff=depth)
    return g.subgraph(near).copy()


@dataclass(frozen=True)
class TrappingRun:
    seed: int
    outcome: RunOutcome
    report: ReachabilityReport


def find_trapping_run(
    game: Game,
    seeds: Iterable[int],
    initial: Optional[State] = None,
    max_slots: int = DEFAULT_MAX_SLOTS,
    cap: Optional[int] = None,
) -> Optional[TrappingRun]:
    """First seed whose run times out inside a trap although an equilibrium
    was reachable from the start."""
    start = initial if initial is not None else game.initial_state()
    graph = build_transition_graph(game, cap)
    report = reachability_analysis(game, start, graph=graph)
    if not (report.pne_reachable and report.has_trap):
        return None
    for seed in seeds:
        outcome = run(game, start, UpdateRule(seed=seed, max_slots=max_slots))
        if outcome.converged:
            continue
        if state_index(game, outcome.final_state) in report.trap:
            logger.info("seed %d ends trapped after %d slots", seed, max_slots)
            return TrappingRun(seed, outcome, report)
    return None


# ---------------------------------------------------------------------------
# Minimum total congestion
# ---------------------------------------------------------------------------

def min_total_congestion_states(game: Game, cap: Optional[int] = None) -> List[State]:
    """All states of least total congestion; for undirected S these are equilibria."""
    if not game.homogeneous:
        raise NotHomogeneousError("Total-congestion minimisers are defined for resource-homogeneous games")
    count = _check_cap(game, cap)
    best = np.inf
    winners: List[State] = []
    for _, block in _blocks(game, count):
        by_player = batch_congestion(game, block).transpose(0, 2, 1)
        levels = np.take_along_axis(by_player, (block - 1)[:, :, None], axis=2)[:, :, 0]
        totals = np.zeros(block.shape[0])
        for n in range(game.n_players):
            totals += levels[:, n]
        low = totals.min()
        if low < best:
            best, winners = low, []
        if low == best:
            winners.extend(State(tuple(row)) for row in block[totals == best].tolist())
    return winners
