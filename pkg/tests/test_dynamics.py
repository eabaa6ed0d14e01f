"""
Tests for random better-response dynamics.
"""

import json
import logging

import numpy as np
import pytest

from graphical_congestion.errors import ConfigError
from graphical_congestion.interfaces import Game, SpatialMatrix, State
from graphical_congestion.payoffs import NegLinear
from graphical_congestion.engine.dynamics import (
    Converged,
    TimedOut,
    TrajectoryRecord,
    UpdateRule,
    run,
    step,
)
from graphical_congestion.engine.game import is_better_response, is_pure_nash
from graphical_congestion.engine.generators import (
    assemble_game,
    gen_directed_weighted,
    gen_heterogeneous_payoffs,
    gen_homogeneous_payoffs,
    gen_undirected_weighted,
)


def random_game(seed: int, n_players: int = 6, n_resources: int = 3, homogeneous: bool = False) -> Game:
    rng = np.random.default_rng(seed)
    spatial = gen_undirected_weighted(n_players, rng)
    if homogeneous:
        payoffs = gen_homogeneous_payoffs(n_players, n_resources)
    else:
        payoffs = gen_heterogeneous_payoffs(n_players, n_resources, rng)
    return assemble_game(spatial, n_resources, payoffs)


# ============================================================
# step
# ============================================================

class TestStep:
    def test_none_at_equilibrium(self, trap_game):
        assert step(trap_game, State((1, 2, 1, 2)), np.random.default_rng(0)) is None

    def test_single_player_changes_to_better_response(self):
        game = random_game(3)
        rng = np.random.default_rng(1)
        state = game.initial_state()
        for _ in range(20):
            result = step(game, state, rng)
            if result is None:
                break
            changed = [n for n in range(game.n_players) if result.state[n] != state[n]]
            assert changed == [result.player]
            assert result.from_resource == state[result.player]
            assert is_better_response(game, state, result.player, result.to_resource)
            state = result.state

    def test_same_seed_same_choice(self, triangle_game):
        a = step(triangle_game, State((1, 1, 1)), np.random.default_rng(42))
        b = step(triangle_game, State((1, 1, 1)), np.random.default_rng(42))
        assert (a.player, a.to_resource) == (b.player, b.to_resource)

    def test_only_improvable_players_move(self, trap_game):
        # the triangle is settled around player 3, who still wants to leave resource 1
        rng = np.random.default_rng(0)
        for _ in range(10):
            result = step(trap_game, State((2, 1, 2, 1)), rng)
            assert result.player == 3
            assert result.to_resource in (2, 3)

    def test_best_response_option(self, trap_game):
        # ties between resources 2 and 3 go to the smaller one
        result = step(trap_game, State((2, 1, 2, 1)), np.random.default_rng(0), use_best_response=True)
        assert (result.player, result.to_resource) == (3, 2)


# ============================================================
# run
# ============================================================

class TestRun:
    def test_already_at_equilibrium(self, trap_game):
        outcome = run(trap_game, State((1, 2, 1, 2)))
        assert outcome.converged
        assert outcome.status == Converged(State((1, 2, 1, 2)), 0)

    def test_default_initial_state_is_all_ones(self):
        game = Game.build(SpatialMatrix.zeros(3), 2, lambda n, r: NegLinear())
        outcome = run(game)
        assert outcome.final_state == State((1, 1, 1))
        assert outcome.slots == 0

    def test_triangle_times_out(self, triangle_game):
        outcome = run(triangle_game, rule=UpdateRule(seed=0, max_slots=200))
        assert isinstance(outcome.status, TimedOut)
        assert outcome.slots is None
        assert outcome.status.slots == 200

    def test_timeout_logs_a_warning(self, triangle_game, caplog):
        with caplog.at_level(logging.WARNING, logger="graphical_congestion.engine.dynamics"):
            run(triangle_game, rule=UpdateRule(seed=0, max_slots=20))
        warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
        assert any("did not converge within 20 slots" in r.getMessage() for r in warnings)

    def test_trapped_start_times_out(self, trap_game):
        outcome = run(trap_game, State((1, 1, 1, 3)), UpdateRule(seed=5, max_slots=300))
        assert not outcome.converged
        assert outcome.final_state[3] == 3

    def test_converged_state_is_equilibrium(self):
        for seed in range(20):
            game = random_game(seed, n_resources=2)
            outcome = run(game, rule=UpdateRule(seed=seed))
            assert outcome.converged
            assert is_pure_nash(game, outcome.final_state)
            assert outcome.slots <= 10_000

    def test_replay_is_identical(self):
        game = assemble_game(gen_directed_weighted(6, np.random.default_rng(4)), 3,
                             gen_heterogeneous_payoffs(6, 3, np.random.default_rng(5)))
        rule = UpdateRule(seed=123, max_slots=500, record_trajectory=True)
        first, second = run(game, rule=rule), run(game, rule=rule)
        assert first.status == second.status
        assert [r.to_dict() for r in first.trajectory] == [r.to_dict() for r in second.trajectory]

    def test_external_generator_continues_stream(self, triangle_game):
        rng = np.random.default_rng(9)
        run(triangle_game, rule=UpdateRule(max_slots=5), rng=rng)
        after = rng.integers(1 << 30)
        rng2 = np.random.default_rng(9)
        assert after != rng2.integers(1 << 30)

    def test_rejects_invalid_rule(self):
        with pytest.raises(ConfigError):
            UpdateRule(max_slots=0)


class TestTrajectory:
    def test_records_one_row_per_slot(self):
        game = random_game(7, n_resources=2)
        outcome = run(game, rule=UpdateRule(seed=7, record_trajectory=True))
        assert len(outcome.trajectory) == outcome.slots
        assert [r.slot for r in outcome.trajectory] == list(range(1, outcome.slots + 1))

    def test_json_uses_from_and_to(self, triangle_game):
        outcome = run(triangle_game, rule=UpdateRule(seed=1, max_slots=3, record_trajectory=True))
        row = json.loads(outcome.trajectory[0].to_json())
        assert {"slot", "player", "from", "to", "congestion_of_player_before",
                "congestion_of_player_after", "total_congestion", "potential_v"} <= set(row)
        assert TrajectoryRecord.from_json(outcome.trajectory[0].to_json()) == outcome.trajectory[0]

    def test_potential_only_for_undirected_two_resource_games(self, triangle_game):
        outcome = run(triangle_game, rule=UpdateRule(seed=1, max_slots=3, record_trajectory=True))
        assert all(r.potential_v is None for r in outcome.trajectory)
        game = random_game(8, n_players=5, n_resources=2)
        outcome = run(game, rule=UpdateRule(seed=8, record_trajectory=True))
        assert all(r.potential_v is not None for r in outcome.trajectory)

    def test_mover_congestion_does_not_rise_in_homogeneous_games(self):
        game = random_game(9, homogeneous=True)
        outcome = run(game, rule=UpdateRule(seed=9, record_trajectory=True))
        for r in outcome.trajectory:
            assert r.congestion_of_player_after < r.congestion_of_player_before


class TestHomogeneousReplay:
    def test_reciprocal_and_neg_linear_evolve_identically(self):
        rng = np.random.default_rng(12)
        spatial = gen_undirected_weighted(7, rng)
        reciprocal = assemble_game(spatial, 3, gen_homogeneous_payoffs(7, 3))
        linear = Game.build(spatial, 3, lambda n, r: NegLinear())
        rule = UpdateRule(seed=77, record_trajectory=True)
        a, b = run(reciprocal, rule=rule), run(linear, rule=rule)
        assert a.status == b.status
        assert [(r.player, r.to_resource) for r in a.trajectory] == [(r.player, r.to_resource) for r in b.trajectory]
