"""Batches of seeded random trials and parameter sweeps over them.

Trial t of a batch draws everything (instance, initial state, dynamics)
from one generator seeded with ``derive_trial_seed(base_seed, t)``: the
first 64-bit word of ``SeedSequence([base_seed, t])``. Streams of different
trials are independent and a report can be reproduced trial by trial.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
from dataclasses_json import DataClassJsonMixin

from ..errors import ConfigError
from ..interfaces import Game, State
from ..metrics.analytics import summarize_batch, trials_frame
from .dynamics import DEFAULT_MAX_SLOTS, UpdateRule, run
from .generators import PAYOFF_FAMILIES, SPATIAL_GENERATORS, random_game
from .wireless import (
    DEFAULT_ALPHA,
    DEFAULT_BANDWIDTH_HZ,
    DEFAULT_NOISE_DENSITY,
    DEFAULT_POWER_MW,
    gen_wireless,
)

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS = ("random-batch", "wireless-batch", "statespace", "solve", "reduction")
BATCH_KINDS = ("random-batch", "wireless-batch")
SWEEP_AXES = {"players": "n_players", "resources": "n_resources", "region_length": "region_length"}
INITIAL_RULES = ("ones", "random")
SOLVE_METHODS = ("dag", "tree", "dynamics")


@dataclass
class ExperimentConfig(DataClassJsonMixin):
    kind: str = "random-batch"
    n_players: int = 6
    n_resources: int = 3
    # one of generators.SPATIAL_GENERATORS / PAYOFF_FAMILIES
    spatial_generator: str = "undirected-weighted"
    payoff_family: str = "heterogeneous"
    # wireless scenario, metres / mW / Hz / mW per Hz
    region_length: float = 200.0
    power_mw: float = DEFAULT_POWER_MW
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    alpha: float = DEFAULT_ALPHA
    noise_density: float = DEFAULT_NOISE_DENSITY
    trials: int = 1000
    base_seed: int = 0
    max_slots: int = DEFAULT_MAX_SLOTS
    fast_threshold: int = 10
    # 'ones' = everybody on resource 1, 'random' = uniform available resource;
    # None picks 'random' for wireless batches and 'ones' otherwise
    initial: Optional[str] = None
    workers: int = 1
    # inputs of the single-game kinds: game_path for 'solve' and 'statespace',
    # graph_path for 'reduction'; method for 'solve' only
    game_path: Optional[str] = None
    graph_path: Optional[str] = None
    method: str = "dynamics"
    # where the CLI writes results when no --out is given (csv only for batches and sweeps)
    out_csv: Optional[str] = None
    out_json: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"Unknown experiment kind: {self.kind}. Available: {list(EXPERIMENT_KINDS)}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.max_slots < 1:
            raise ConfigError(f"max_slots must be at least 1, got {self.max_slots}")
        if not 0 <= self.fast_threshold <= self.max_slots:
            raise ConfigError(f"fast_threshold must lie in [0, max_slots], got {self.fast_threshold}")
        if self.n_players < 1 or self.n_resources < 1:
            raise ConfigError("n_players and n_resources must be positive")
        if self.spatial_generator not in SPATIAL_GENERATORS:
            raise ConfigError(f"Unknown spatial generator: {self.spatial_generator}")
        if self.payoff_family not in PAYOFF_FAMILIES:
            raise ConfigError(f"Unknown payoff family: {self.payoff_family}")
        if self.initial is not None and self.initial not in INITIAL_RULES:
            raise ConfigError(f"initial must be one of {list(INITIAL_RULES)}, got {self.initial}")
        if self.method not in SOLVE_METHODS:
            raise ConfigError(f"method must be one of {list(SOLVE_METHODS)}, got {self.method}")
        if self.region_length <= 0:
            raise ConfigError(f"region_length must be positive, got {self.region_length}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.base_seed < 0:
            raise ConfigError(f"base_seed must be non-negative, got {self.base_seed}")

    @property
    def initial_rule(self) -> str:
        if self.initial is not None:
            return self.initial
        return "random" if self.kind == "wireless-batch" else "ones"


@dataclass
class TrialRecord(DataClassJsonMixin):
    trial: int
    seed: int
    converged: bool
    slots: Optional[int] = None


@dataclass
class BatchReport(DataClassJsonMixin):
    config: ExperimentConfig
    n_trials: int
    n_converged: int
    converged_fraction: float
    fast_fraction: float
    mean_slots: Optional[float]
    median_slots: Optional[float]
    max_slots_observed: Optional[int]
    # sorted [slots, count] pairs over converged trials
    histogram: List[List[int]]
    records: List[TrialRecord] = field(default_factory=list)
    axis_value: Optional[float] = None


def derive_trial_seed(base_seed: int, trial: int) -> int:
    state = np.random.SeedSequence([base_seed, trial]).generate_state(1, np.uint64)
    return int(state[0])


def build_instance(config: ExperimentConfig, rng: np.random.Generator) -> Game:
    if config.kind == "wireless-batch":
        _, game = gen_wireless(
            config.n_players,
            config.n_resources,
            config.region_length,
            rng,
            power_mw=config.power_mw,
            bandwidth_hz=config.bandwidth_hz,
            alpha=config.alpha,
            noise_density=config.noise_density,
        )
        return game
    return random_game(config.n_players, config.n_resources, config.spatial_generator, config.payoff_family, rng)


def initial_state(game: Game, rule: str, rng: np.random.Generator) -> State:
    if rule == "ones":
        return game.initial_state()
    return State(tuple(rs[int(rng.integers(len(rs)))] for rs in game.available))


def run_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    seed = derive_trial_seed(config.base_seed, trial)
    rng = np.random.default_rng(seed)
    game = build_instance(config, rng)
    start = initial_state(game, config.initial_rule, rng)
    outcome = run(game, start, UpdateRule(seed=seed, max_slots=config.max_slots), rng=rng)
    return TrialRecord(trial=trial, seed=seed, converged=outcome.converged, slots=outcome.slots)


def run_batch(config: ExperimentConfig) -> BatchReport:
    if config.kind not in BATCH_KINDS:
        raise ConfigError(f"run_batch needs one of {list(BATCH_KINDS)}, got {config.kind}")
    logger.info("running %d %s trials (N=%d, R=%d)", config.trials, config.kind, config.n_players, config.n_resources)
    work = partial(run_trial, config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            # map yields in trial order whatever the scheduling
            records = list(pool.map(work, range(config.trials), chunksize=max(1, config.trials // (4 * config.workers))))
    else:
        records = [work(t) for t in range(config.trials)]
    aggregates = summarize_batch(trials_frame(records), config.fast_threshold)
    report = BatchReport(config=config, records=records, **aggregates)
    if report.n_converged < report.n_trials:
        logger.warning("%d of %d trials timed out after %d slots", report.n_trials - report.n_converged, report.n_trials, config.max_slots)
    else:
        logger.info("all %d trials converged", report.n_trials)
    return report


def sweep(config: ExperimentConfig, axis: str, values: Sequence[float]) -> List[BatchReport]:
    """One batch per value of ``axis`` (players, resources or region_length)."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"Unknown sweep axis: {axis}. Available: {list(SWEEP_AXES)}")
    if not values:
        raise ConfigError("A sweep needs at least one value")
    name = SWEEP_AXES[axis]
    reports = []
    for value in values:
        cast = float(value) if name == "region_length" else int(value)
        report = run_batch(dataclasses.replace(config, **{name: cast}))
        report.axis_value = cast
        reports.append(report)
    return reports
