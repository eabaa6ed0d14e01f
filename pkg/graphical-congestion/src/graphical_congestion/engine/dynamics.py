"""Asynchronous better-response dynamics.

Each time slot one player moves. The mover is drawn uniformly from the
players that have a better response (collected in ascending index order),
then the new resource is drawn uniformly from that player's better responses
(ascending). Draws come from a numpy PCG64 ``Generator`` so a seed fixes the
whole trajectory.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from dataclasses_json import DataClassJsonMixin, config

from ..errors import ConfigError
from ..interfaces import Game, State
from .game import congestion_vector, improvement_mask, is_pure_nash
from .potentials import compute_thresholds, potential_two_resource, supports_two_resource_potential
from .solvers import best_response

logger = logging.getLogger(__name__)

DEFAULT_MAX_SLOTS = 10_000


@dataclass
class UpdateRule:
    seed: int = 0
    max_slots: int = DEFAULT_MAX_SLOTS
    record_trajectory: bool = False
    # best_response=True: the drawn player jumps to its best response
    # instead of a uniformly drawn better response
    best_response: bool = False

    def __post_init__(self) -> None:
        if self.max_slots < 1:
            raise ConfigError(f"max_slots must be positive, got {self.max_slots}")


@dataclass(frozen=True)
class StepResult:
    state: State
    player: int
    from_resource: int
    to_resource: int


@dataclass(frozen=True)
class Converged:
    state: State
    slots: int


@dataclass(frozen=True)
class TimedOut:
    state: State
    slots: int


@dataclass
class TrajectoryRecord(DataClassJsonMixin):
    slot: int
    player: int
    from_resource: int = field(metadata=config(field_name="from"))
    to_resource: int = field(metadata=config(field_name="to"))
    congestion_of_player_before: float
    congestion_of_player_after: float
    total_congestion: float
    potential_v: Optional[float] = None
    total_congestion_before: Optional[float] = None
    potential_v_before: Optional[float] = None


@dataclass
class RunOutcome:
    status: Union[Converged, TimedOut]
    trajectory: Optional[List[TrajectoryRecord]] = None

    @property
    def converged(self) -> bool:
        return isinstance(self.status, Converged)

    @property
    def final_state(self) -> State:
        return self.status.state

    @property
    def slots(self) -> Optional[int]:
        return self.status.slots if self.converged else None


def step(
    game: Game,
    state: State,
    rng: np.random.Generator,
    use_best_response: bool = False,
) -> Optional[StepResult]:
    """Apply one random better-response update; ``None`` when ``state`` is a PNE."""
    mask = improvement_mask(game, state)
    movers = np.flatnonzero(mask.any(axis=1))
    if movers.size == 0:
        return None
    n = int(movers[rng.integers(movers.size)])
    if use_best_response:
        r = best_response(game, state, n)
    else:
        options = np.flatnonzero(mask[n]) + 1
        r = int(options[rng.integers(options.size)])
    return StepResult(state.with_choice(n, r), n, state[n], r)


class _TrajectoryRecorder:
    """Builds trajectory rows; V is filled in only for undirected two-resource games."""

    def __init__(self, game: Game) -> None:
        self.game = game
        self.thresholds = compute_thresholds(game) if supports_two_resource_potential(game) else None

    def _potential(self, state: State) -> Optional[float]:
        if self.thresholds is None:
            return None
        return potential_two_resource(self.game, state, self.thresholds)

    def record(self, slot: int, before: State, result: StepResult) -> TrajectoryRecord:
        levels_before = congestion_vector(self.game, before)
        levels_after = congestion_vector(self.game, result.state)
        n = result.player
        return TrajectoryRecord(
            slot=slot,
            player=n,
            from_resource=result.from_resource,
            to_resource=result.to_resource,
            congestion_of_player_before=float(levels_before[n]),
            congestion_of_player_after=float(levels_after[n]),
            total_congestion=_ordered_sum(levels_after),
            potential_v=self._potential(result.state),
            total_congestion_before=_ordered_sum(levels_before),
            potential_v_before=self._potential(before),
        )


def _ordered_sum(values: np.ndarray) -> float:
    total = 0.0
    for v in values:
        total += float(v)
    return total


def run(
    game: Game,
    initial: Optional[State] = None,
    rule: Optional[UpdateRule] = None,
    rng: Optional[np.random.Generator] = None,
) -> RunOutcome:
    """Iterate ``step`` until a pure Nash equilibrium or ``rule.max_slots`` slots.

    ``initial`` defaults to every player on resource 1. Passing ``rng``
    continues an existing generator instead of seeding one from ``rule.seed``.
    """
    rule = rule or UpdateRule()
    state = initial if initial is not None else game.initial_state()
    game.validate_state(state)
    if rng is None:
        rng = np.random.default_rng(rule.seed)
    recorder = _TrajectoryRecorder(game) if rule.record_trajectory else None
    trajectory: Optional[List[TrajectoryRecord]] = [] if recorder else None
    debug = logger.isEnabledFor(logging.DEBUG)

    for slot in range(rule.max_slots):
        result = step(game, state, rng, rule.best_response)
        if result is None:
            return RunOutcome(Converged(state, slot), trajectory)
        if debug:
            logger.debug("slot %d: player %d %d -> %d", slot + 1, result.player, result.from_resource, result.to_resource)
        if recorder is not None:
            trajectory.append(recorder.record(slot + 1, state, result))
        state = result.state

    if is_pure_nash(game, state):
        return RunOutcome(Converged(state, rule.max_slots), trajectory)
    logger.warning("run did not converge within %d slots", rule.max_slots)
    return RunOutcome(TimedOut(state, rule.max_slots), trajectory)
