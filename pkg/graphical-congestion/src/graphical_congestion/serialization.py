"""File formats.

* Game JSON: ``{n_players, n_resources, available, payoffs, spatial}`` with
  1-based resources and 0-based players; ``payoffs`` is a list of
  ``{player, resource, variant, params}``.
* Trajectories: JSON lines, one ``TrajectoryRecord`` per slot.
* Trials: CSV ``trial,seed,converged,slots``.
* State graphs: DOT, and JSON ``{states, edges, pne}``.
* Graphs for the colouring reduction: JSON ``{"adjacency": [[...]]}`` or
  ``{"n": k, "edges": [[u, v], ...]}``, or a text edge list whose first
  line is the vertex count.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import networkx as nx
import numpy as np

from .engine.dynamics import TrajectoryRecord
from .engine.statespace import TransitionGraph
from .errors import InvalidGameError
from .interfaces import Game, PayoffFunction, SpatialMatrix
from .metrics.analytics import trials_frame
from .payoffs.registry import PAYOFF_VARIANTS, payoff_from_params

PathLike = Union[str, Path]
GAME_FIELDS = ("n_players", "n_resources", "available", "payoffs", "spatial")


# ---------------------------------------------------------------------------
# Games
# ---------------------------------------------------------------------------

def payoff_to_dict(player: int, resource: int, fn: PayoffFunction) -> Dict[str, Any]:
    if fn.variant not in PAYOFF_VARIANTS:
        raise InvalidGameError(f"Payoff variant {fn.variant} has no file representation")
    return {"player": player, "resource": resource, "variant": fn.variant, "params": fn.params()}


def game_to_dict(game: Game) -> Dict[str, Any]:
    return {
        "n_players": game.n_players,
        "n_resources": game.n_resources,
        "available": [list(rs) for rs in game.available],
        "payoffs": [payoff_to_dict(n, r, game.payoffs[(n, r)]) for n, rs in enumerate(game.available) for r in rs],
        "spatial": game.weights.tolist(),
    }


def game_from_dict(data: Dict[str, Any]) -> Game:
    missing = [key for key in GAME_FIELDS if key not in data]
    if missing:
        raise InvalidGameError(f"Game document is missing {missing}")
    spatial = SpatialMatrix(np.asarray(data["spatial"], dtype=float))
    if spatial.n_players != data["n_players"]:
        raise InvalidGameError(f"n_players={data['n_players']} but spatial is {spatial.n_players}x{spatial.n_players}")
    payoffs: Dict[tuple, PayoffFunction] = {}
    for entry in data["payoffs"]:
        try:
            key = (int(entry["player"]), int(entry["resource"]))
            fn = payoff_from_params(entry["variant"], dict(entry.get("params", {})))
        except KeyError as exc:
            raise InvalidGameError(f"Payoff entry {entry} lacks {exc}") from None
        if key in payoffs:
            raise InvalidGameError(f"Duplicate payoff for player {key[0]}, resource {key[1]}")
        payoffs[key] = fn
    available = tuple(tuple(int(r) for r in rs) for rs in data["available"])
    return Game(spatial, int(data["n_resources"]), available, payoffs)


def save_game(game: Game, path: PathLike) -> None:
    Path(path).write_text(json.dumps(game_to_dict(game), indent=2), encoding="utf-8")


def load_game(path: PathLike) -> Game:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidGameError(f"{path} is not valid JSON: {exc}") from None
    return game_from_dict(data)


# ---------------------------------------------------------------------------
# Trajectories and batches
# ---------------------------------------------------------------------------

def trajectory_to_jsonl(records: Iterable[TrajectoryRecord]) -> str:
    return "".join(record.to_json() + "\n" for record in records)


def write_trajectory(records: Iterable[TrajectoryRecord], path: PathLike) -> None:
    Path(path).write_text(trajectory_to_jsonl(records), encoding="utf-8")


def trials_to_csv(records: Iterable[Any]) -> str:
    return trials_frame(records).to_csv(index=False)


# ---------------------------------------------------------------------------
# State graphs
# ---------------------------------------------------------------------------

def transition_graph_to_dict(graph: TransitionGraph) -> Dict[str, Any]:
    return {
        "states": graph.states.tolist(),
        "edges": graph.edges.tolist(),
        "pne": graph.pne_indices.tolist(),
    }


def transition_graph_to_dot(
    graph: Union[TransitionGraph, nx.DiGraph],
    initial: Optional[int] = None,
    path: Optional[Sequence[int]] = None,
) -> str:
    """DOT text. Equilibria are double circles, ``initial`` is filled and the
    consecutive states of ``path`` are joined by bold red edges."""
    g = graph.to_networkx() if isinstance(graph, TransitionGraph) else graph
    on_path = set(zip(path[:-1], path[1:])) if path else set()
    lines = ["digraph states {", "  node [shape=circle];"]
    for node, attrs in sorted(g.nodes(data=True)):
        label = " ".join(str(r) for r in attrs["choices"])
        style = ["shape=doublecircle"] if attrs.get("pne") else []
        if node == initial:
            style.append('style=filled, fillcolor="lightgrey"')
        lines.append(f'  s{node} [label="{label}"{", " if style else ""}{", ".join(style)}];')
    for src, dst, attrs in sorted(g.edges(data=True)):
        style = ', color="red", penwidth=2' if (src, dst) in on_path else ""
        lines.append(f'  s{src} -> s{dst} [label="{attrs["player"]}:{attrs["resource"]}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Graphs for the reduction
# ---------------------------------------------------------------------------

def adjacency_from_edges(n_vertices: int, edges: Iterable[Sequence[int]]) -> np.ndarray:
    a = np.zeros((n_vertices, n_vertices))
    for u, v in edges:
        if u == v:
            raise InvalidGameError(f"Self-loop on vertex {u}")
        a[u, v] = a[v, u] = 1.0
    return a


def load_graph(path: PathLike) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        data = json.loads(text)
        if "adjacency" in data:
            return np.asarray(data["adjacency"], dtype=float)
        if "n" in data and "edges" in data:
            return adjacency_from_edges(int(data["n"]), data["edges"])
        raise InvalidGameError("Graph JSON needs 'adjacency' or 'n' and 'edges'")
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 1:
        raise InvalidGameError("Edge-list file must start with the vertex count")
    return adjacency_from_edges(int(rows[0][0]), ((int(u), int(v)) for u, v in rows[1:]))
