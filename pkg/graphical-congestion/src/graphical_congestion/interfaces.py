from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Dict, Iterator, Mapping, Optional, Protocol, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .errors import InvalidGameError, InvalidStateError, ResourceUnavailableError

Number = Union[float, np.ndarray]


class PayoffFunction(Protocol):
    """A strictly decreasing payoff of the congestion level.

    Implementations accept a float or a numpy array and must be structurally
    comparable: two payoffs with the same ``variant`` and ``params()`` are
    the same function.
    """

    variant: str

    def __call__(self, x: Number) -> Number:
        ...

    def params(self) -> Dict[str, float]:
        ...


@dataclass(frozen=True, eq=False)
class SpatialMatrix:
    """N x N congestion weights; ``weights[m, n]`` is what m inflicts on n.

    The digraph D(S) has an edge m -> n whenever ``weights[m, n] > 0``.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise InvalidGameError(f"Spatial matrix must be square and non-empty, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InvalidGameError("Spatial matrix entries must be finite")
        if np.any(w < 0):
            raise InvalidGameError("Spatial matrix entries must be non-negative")
        if np.any(np.diag(w) != 0):
            raise InvalidGameError("Spatial matrix diagonal must be zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, n_players: int) -> "SpatialMatrix":
        return cls(np.zeros((n_players, n_players)))

    @classmethod
    def from_edges(cls, n_players: int, edges: Mapping[Tuple[int, int], float]) -> "SpatialMatrix":
        w = np.zeros((n_players, n_players))
        for (src, dst), value in edges.items():
            w[src, dst] = value
        return cls(w)

    @property
    def n_players(self) -> int:
        return int(self.weights.shape[0])

    def in_weight(self, n: int) -> float:
        """Sum of S[m, n] over m, accumulated in ascending m."""
        total = 0.0
        for m in range(self.n_players):
            total += float(self.weights[m, n])
        return total

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.weights, self.weights.T))

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n_players))
        src, dst = np.nonzero(self.weights > 0)
        g.add_weighted_edges_from((int(a), int(b), float(self.weights[a, b])) for a, b in zip(src, dst))
        return g

    def underlying_graph(self) -> nx.Graph:
        """Undirected simple graph: one edge per linked pair, whatever the direction."""
        return nx.Graph(self.digraph().to_undirected(as_view=True))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpatialMatrix):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights))

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())


@dataclass(frozen=True)
class State:
    """One resource per player. Players are 0-based, resources 1-based."""

    choices: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "choices", tuple(int(c) for c in self.choices))

    def __len__(self) -> int:
        return len(self.choices)

    def __getitem__(self, n: int) -> int:
        return self.choices[n]

    def __iter__(self) -> Iterator[int]:
        return iter(self.choices)

    def with_choice(self, n: int, resource: int) -> "State":
        choices = list(self.choices)
        choices[n] = resource
        return State(tuple(choices))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.choices, dtype=np.int64)


@dataclass(frozen=True)
class StructureReport:
    is_undirected: bool
    is_dag: bool
    is_directed_tree: bool


@dataclass(frozen=True, eq=False)
class Game:
    """A graphical congestion game with weighted edges.

    ``available[n]`` lists the (1-based) resources player n may use and
    ``payoffs[(n, r)]`` holds f_n^r for exactly those pairs.
    """

    spatial: SpatialMatrix
    n_resources: int
    available: Tuple[Tuple[int, ...], ...]
    payoffs: Mapping[Tuple[int, int], PayoffFunction] = field(repr=False)

    def __post_init__(self) -> None:
        n = self.spatial.n_players
        if self.n_resources < 1:
            raise InvalidGameError("A game needs at least one resource")
        if len(self.available) != n:
            raise InvalidGameError(f"Expected {n} availability sets, got {len(self.available)}")
        available = tuple(tuple(sorted(set(int(r) for r in rs))) for rs in self.available)
        for player, rs in enumerate(available):
            if not rs:
                raise InvalidGameError(f"Player {player} has no available resource")
            if rs[0] < 1 or rs[-1] > self.n_resources:
                raise InvalidGameError(f"Player {player} lists resources outside 1..{self.n_resources}")
        expected = {(player, r) for player, rs in enumerate(available) for r in rs}
        keys = set(self.payoffs.keys())
        if keys != expected:
            missing = sorted(expected - keys)
            extra = sorted(keys - expected)
            raise InvalidGameError(f"Payoff table mismatch: missing {missing[:5]}, unexpected {extra[:5]}")
        object.__setattr__(self, "available", available)
        object.__setattr__(self, "payoffs", MappingProxyType(dict(self.payoffs)))

    @classmethod
    def build(
        cls,
        spatial: SpatialMatrix,
        n_resources: int,
        payoff_for: Callable[[int, int], PayoffFunction],
        available: Optional[Sequence[Sequence[int]]] = None,
    ) -> "Game":
        """Assemble a game from a payoff factory; every resource is available by default."""
        if available is None:
            available = [range(1, n_resources + 1)] * spatial.n_players
        payoffs = {(n, r): payoff_for(n, r) for n, rs in enumerate(available) for r in rs}
        return cls(spatial, n_resources, tuple(tuple(rs) for rs in available), payoffs)

    @property
    def n_players(self) -> int:
        return self.spatial.n_players

    @property
    def weights(self) -> np.ndarray:
        return self.spatial.weights

    def payoff_of(self, n: int, r: int) -> PayoffFunction:
        try:
            return self.payoffs[(n, r)]
        except KeyError:
            raise ResourceUnavailableError(n, r) from None

    def with_payoffs(self, overrides: Mapping[Tuple[int, int], PayoffFunction]) -> "Game":
        """New game whose payoff table is this one with ``overrides`` laid on top."""
        merged: Dict[Tuple[int, int], PayoffFunction] = dict(self.payoffs)
        for key, fn in overrides.items():
            if key not in merged:
                raise ResourceUnavailableError(*key)
            merged[key] = fn
        return Game(self.spatial, self.n_resources, self.available, merged)

    @cached_property
    def availability_mask(self) -> np.ndarray:
        mask = np.zeros((self.n_players, self.n_resources), dtype=bool)
        for n, rs in enumerate(self.available):
            mask[n, [r - 1 for r in rs]] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def homogeneous(self) -> bool:
        for n, rs in enumerate(self.available):
            first = self.payoffs[(n, rs[0])]
            for r in rs[1:]:
                other = self.payoffs[(n, r)]
                if other.variant != first.variant or other.params() != first.params():
                    return False
        return True

    def initial_state(self) -> State:
        """Everybody on resource 1 (or on their lowest available resource)."""
        return State(tuple(rs[0] for rs in self.available))

    def validate_state(self, state: State) -> None:
        if len(state) != self.n_players:
            raise InvalidStateError(f"State has {len(state)} choices for {self.n_players} players")
        for n, r in enumerate(state):
            if r not in self.available[n]:
                raise InvalidStateError(f"Player {n} is on resource {r}, not in {self.available[n]}")

    def check_player(self, n: int) -> None:
        if not 0 <= n < self.n_players:
            raise IndexError(f"Player index {n} out of range for {self.n_players} players")
