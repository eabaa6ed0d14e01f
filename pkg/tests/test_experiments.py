"""
Tests for seeded batches, sweeps and their aggregates.

The statistical checks on convergence rates over full batches are marked
``slow``; run them with ``pytest -m slow``.
"""

import numpy as np
import pandas as pd
import pytest

from graphical_congestion.errors import ConfigError
from graphical_congestion.engine.experiments import (
    BatchReport,
    ExperimentConfig,
    TrialRecord,
    derive_trial_seed,
    initial_state,
    run_batch,
    run_trial,
    sweep,
)
from graphical_congestion.interfaces import Game, SpatialMatrix, State
from graphical_congestion.payoffs import NegLinear
from graphical_congestion.metrics.analytics import (
    fast_fraction,
    slot_distribution,
    slot_histogram,
    spearman,
    summarize_batch,
    sweep_table,
    trials_frame,
)


def small_config(**overrides) -> ExperimentConfig:
    values = {"trials": 20, "n_players": 5, "n_resources": 2, "max_slots": 2000}
    values.update(overrides)
    return ExperimentConfig(**values)


def records(*slots) -> list:
    return [TrialRecord(trial=i, seed=i, converged=s is not None, slots=s) for i, s in enumerate(slots)]


# ============================================================
# Configuration
# ============================================================

class TestExperimentConfig:
    def test_defaults(self):
        config = ExperimentConfig()
        assert (config.n_players, config.n_resources, config.trials) == (6, 3, 1000)
        assert config.max_slots == 10_000
        assert config.fast_threshold == 10
        assert config.initial_rule == "ones"

    def test_wireless_starts_random(self):
        assert ExperimentConfig(kind="wireless-batch").initial_rule == "random"
        assert ExperimentConfig(kind="wireless-batch", initial="ones").initial_rule == "ones"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": "grid-search"},
            {"trials": 0},
            {"max_slots": 0},
            {"fast_threshold": 20, "max_slots": 10},
            {"spatial_generator": "lattice"},
            {"payoff_family": "linear"},
            {"initial": "zeros"},
            {"method": "annealing"},
            {"region_length": -5.0},
            {"workers": 0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ConfigError):
            ExperimentConfig(**kwargs)

    def test_json_round_trip(self):
        config = small_config(base_seed=9, spatial_generator="directed-weighted")
        assert ExperimentConfig.from_json(config.to_json()) == config


# ============================================================
# Seeding and single trials
# ============================================================

class TestTrials:
    def test_seed_derivation_is_stable(self):
        assert derive_trial_seed(0, 0) == derive_trial_seed(0, 0)
        assert derive_trial_seed(0, 0) != derive_trial_seed(0, 1)
        assert derive_trial_seed(0, 1) != derive_trial_seed(1, 0)
        assert 0 <= derive_trial_seed(123, 4) < 2**64

    def test_trial_is_reproducible(self):
        config = small_config(spatial_generator="directed-weighted")
        assert run_trial(config, 3) == run_trial(config, 3)

    def test_random_initial_state_respects_availability(self):
        game = Game.build(SpatialMatrix.zeros(3), 4, lambda n, r: NegLinear(), available=[[2], [1, 3], [4]])
        state = initial_state(game, "random", np.random.default_rng(0))
        game.validate_state(state)
        assert initial_state(game, "ones", np.random.default_rng(0)) == State((2, 1, 4))

    def test_single_trial_at_equilibrium(self):
        # a lone player facing identical channels has nothing to improve
        config = small_config(trials=1, n_players=1, payoff_family="homogeneous")
        report = run_batch(config)
        assert report.n_converged == 1
        assert report.records[0].slots == 0
        assert report.fast_fraction == 1.0
        assert report.histogram == [[0, 1]]


# ============================================================
# Batches
# ============================================================

class TestRunBatch:
    def test_aggregates_are_consistent(self):
        report = run_batch(small_config(trials=30))
        assert report.n_trials == 30
        assert len(report.records) == 30
        assert [r.trial for r in report.records] == list(range(30))
        assert sum(count for _, count in report.histogram) == report.n_converged
        assert report.fast_fraction == fast_fraction(trials_frame(report.records), 10)

    def test_undirected_two_resource_batches_all_converge(self):
        report = run_batch(small_config(trials=40))
        assert report.n_converged == 40
        assert report.converged_fraction == 1.0
        assert report.mean_slots is not None

    def test_same_config_same_report(self):
        config = small_config(spatial_generator="directed-weighted", n_resources=3, max_slots=300)
        assert run_batch(config).to_dict() == run_batch(config).to_dict()

    def test_workers_do_not_change_results(self):
        config = small_config(trials=12, spatial_generator="directed-weighted")
        serial = run_batch(config)
        parallel = run_batch(small_config(trials=12, spatial_generator="directed-weighted", workers=2))
        assert serial.records == parallel.records

    def test_timeouts_are_counted(self):
        config = small_config(trials=10, spatial_generator="directed-weighted", n_players=8,
                              n_resources=3, max_slots=1, fast_threshold=1)
        report = run_batch(config)
        assert report.n_converged <= report.n_trials
        assert all(r.slots is None or r.slots <= 1 for r in report.records)

    def test_rejects_non_batch_kinds(self):
        with pytest.raises(ConfigError):
            run_batch(ExperimentConfig(kind="solve"))

    def test_report_json(self):
        report = run_batch(small_config(trials=3))
        again = BatchReport.from_json(report.to_json())
        assert again.records == report.records
        assert again.config == report.config


class TestSweep:
    def test_single_value(self):
        reports = sweep(small_config(trials=5), "players", [4])
        assert len(reports) == 1
        assert reports[0].axis_value == 4
        assert reports[0].config.n_players == 4

    def test_region_length_is_float(self):
        config = small_config(kind="wireless-batch", trials=2, n_players=4, max_slots=100)
        reports = sweep(config, "region_length", [100, 300])
        assert [r.config.region_length for r in reports] == [100.0, 300.0]

    def test_unknown_axis(self):
        with pytest.raises(ConfigError):
            sweep(small_config(), "alpha", [2, 3])

    def test_empty_values(self):
        with pytest.raises(ConfigError):
            sweep(small_config(), "players", [])

    def test_tables(self):
        reports = sweep(small_config(trials=4), "resources", [2, 3])
        table = sweep_table(reports, "resources")
        assert list(table["resources"]) == [2, 3]
        assert {"fast_fraction", "converged_fraction", "mean_slots"} <= set(table.columns)
        dist = slot_distribution(reports, "resources")
        assert len(dist) == sum(r.n_converged for r in reports)


# ============================================================
# Analytics
# ============================================================

class TestAnalytics:
    def test_frame_types(self):
        df = trials_frame(records(3, None, 0))
        assert str(df["slots"].dtype) == "Int64"
        assert df["slots"].isna().tolist() == [False, True, False]

    def test_fast_fraction_counts_all_trials(self):
        df = trials_frame(records(3, None, 12, 10))
        assert fast_fraction(df, 10) == 0.5

    def test_histogram(self):
        assert slot_histogram(trials_frame(records(2, 2, None, 5))) == [[2, 2], [5, 1]]

    def test_summary_without_convergence(self):
        summary = summarize_batch(trials_frame(records(None, None)), 10)
        assert summary["n_converged"] == 0
        assert summary["mean_slots"] is None
        assert summary["histogram"] == []
        assert summary["fast_fraction"] == 0.0

    def test_summary_statistics(self):
        summary = summarize_batch(trials_frame(records(1, 2, 3, 10)), 10)
        assert summary["mean_slots"] == 4.0
        assert summary["median_slots"] == 2.5
        assert summary["max_slots_observed"] == 10

    def test_spearman(self):
        assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
        assert spearman([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)


# ============================================================
# Convergence statistics over full batches
# ============================================================

@pytest.mark.slow
class TestConvergenceStatistics:
    def test_undirected_uniform_heterogeneous(self):
        report = run_batch(ExperimentConfig(spatial_generator="undirected-uniform"))
        assert report.n_converged == 1000
        within = sum(count for slots, count in report.histogram if slots <= 30)
        assert within >= 990

    def test_undirected_weighted_heterogeneous(self):
        report = run_batch(ExperimentConfig(spatial_generator="undirected-weighted"))
        assert report.n_converged == 1000
        assert 6.5 <= report.mean_slots <= 9.7

    def test_undirected_weighted_homogeneous(self):
        report = run_batch(ExperimentConfig(spatial_generator="undirected-weighted", payoff_family="homogeneous"))
        assert report.n_converged == 1000
        assert 6.0 <= report.mean_slots <= 9.1

    def test_directed_weighted_heterogeneous(self):
        report = run_batch(ExperimentConfig(spatial_generator="directed-weighted"))
        assert report.converged_fraction >= 0.98

    def test_undirected_converges_fast_more_often(self):
        players = list(range(4, 11))
        undirected = sweep(ExperimentConfig(), "players", players)
        directed = sweep(ExperimentConfig(spatial_generator="directed-weighted"), "players", players)
        assert all(r.n_trials == 1000 for r in undirected + directed)
        wins = sum(u.fast_fraction >= d.fast_fraction for u, d in zip(undirected, directed))
        assert wins >= 6

    def test_undirected_converges_fast_more_often_across_resources(self):
        resources = [2, 3, 4, 5, 6]
        undirected = sweep(ExperimentConfig(n_players=6), "resources", resources)
        directed = sweep(ExperimentConfig(n_players=6, spatial_generator="directed-weighted"), "resources", resources)
        assert [r.axis_value for r in undirected] == resources
        assert all(r.n_trials == 1000 for r in undirected + directed)
        wins = sum(u.fast_fraction >= d.fast_fraction for u, d in zip(undirected, directed))
        assert wins >= 4

    def test_wireless_convergence_rises_with_region_length(self):
        config = ExperimentConfig(kind="wireless-batch", n_players=20, n_resources=5, trials=200, max_slots=500)
        lengths = [50, 100, 150, 200, 250, 300, 350, 400, 450, 500]
        reports = sweep(config, "region_length", lengths)
        table = sweep_table(reports, "region_length")
        assert spearman(table["region_length"], table["converged_fraction"]) > 0
        assert isinstance(table, pd.DataFrame)
