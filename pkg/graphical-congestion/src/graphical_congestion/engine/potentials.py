"""Potential functions that decrease along better-response updates.

Two are provided:

* ``potential_two_resource`` for undirected games with resources {1, 2}.
  Each player gets a threshold T_n, the largest congestion it tolerates
  on resource 2 before preferring resource 1.
* total congestion (``engine.game.total_congestion``) for undirected
  resource-homogeneous games; a unilateral move changes it by exactly twice
  the mover's own change, which ``congestion_delta_identity_check`` verifies.

Potentials are diagnostics. The dynamics never consult them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import InvalidStateError, NotTwoResourceGame, NotUndirectedError
from ..interfaces import Game, PayoffFunction, State
from .game import congestion_level, congestion_matrix, total_congestion

THRESHOLD_TOLERANCE = 1e-12
IDENTITY_TOLERANCE = 1e-9
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class ThresholdVector:
    values: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        return self.values[n]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def supports_two_resource_potential(game: Game) -> bool:
    return (
        game.n_resources == 2
        and all(rs == (1, 2) for rs in game.available)
        and game.spatial.is_symmetric()
    )


def _require_two_resources(game: Game) -> None:
    if game.n_resources != 2 or any(rs != (1, 2) for rs in game.available):
        raise NotTwoResourceGame("Needs exactly two resources available to every player")


def _threshold(f1: PayoffFunction, f2: PayoffFunction, total: float) -> float:
    # h(x) = f1(x) - f2(total - x) is strictly decreasing on [0, total];
    # comparisons instead of subtraction keep infinite payoffs usable.
    if f1(0.0) < f2(total):
        return 1.0 + total
    if f1(total) > f2(0.0):
        return -1.0
    lo, hi = 0.0, total
    for _ in range(_MAX_BISECTIONS):
        if hi - lo <= THRESHOLD_TOLERANCE:
            break
        mid = 0.5 * (lo + hi)
        left, right = f1(mid), f2(total - mid)
        if left > right:
            lo = mid
        elif left < right:
            hi = mid
        else:
            return total - mid
    return total - 0.5 * (lo + hi)


def compute_thresholds(game: Game) -> ThresholdVector:
    _require_two_resources(game)
    values = []
    for n in range(game.n_players):
        total = game.spatial.in_weight(n)
        values.append(_threshold(game.payoff_of(n, 1), game.payoff_of(n, 2), total))
    return ThresholdVector(tuple(values))


def potential_two_resource(game: Game, state: State, thresholds: ThresholdVector) -> float:
    """V(X) = 1/2 sum_m sum_m' S[m', m] z_m z_m' - sum_m T_m z_m with z = X - 1."""
    _require_two_resources(game)
    if not game.spatial.is_symmetric():
        raise NotUndirectedError("The two-resource potential needs a symmetric spatial matrix")
    game.validate_state(state)
    z = (state.as_array() - 1).astype(float)
    quadratic = 0.5 * float(z @ game.weights.T @ z)
    linear = float(thresholds.as_array() @ z)
    return quadratic - linear


def two_resource_delta(game: Game, state: State, n: int, resource: int, thresholds: ThresholdVector) -> float:
    """Predicted V(Y) - V(X) when n moves to ``resource``:
    (Y_n - X_n) * (sum_m S[m, n] (X_m - 1) - T_n)."""
    _require_two_resources(game)
    game.validate_state(state)
    on_two = float(congestion_matrix(game, state)[1, n])
    return (resource - state[n]) * (on_two - thresholds[n])


def congestion_delta_identity_check(game: Game, state_before: State, state_after: State, n: int) -> bool:
    """C(Y) - C(X) == 2 (c_n(Y) - c_n(X)) for a unilateral move of n on a symmetric S."""
    if not game.spatial.is_symmetric():
        raise NotUndirectedError("The congestion identity needs a symmetric spatial matrix")
    game.validate_state(state_before)
    game.validate_state(state_after)
    moved = [m for m in range(game.n_players) if state_before[m] != state_after[m]]
    if moved not in ([], [n]):
        raise InvalidStateError(f"States must differ only at player {n}, they differ at {moved}")
    lhs = total_congestion(game, state_after) - total_congestion(game, state_before)
    rhs = 2.0 * (congestion_level(game, state_after, n) - congestion_level(game, state_before, n))
    return abs(lhs - rhs) <= IDENTITY_TOLERANCE
