"""Graphical congestion games with weighted edges: dynamics, solvers and state-space analysis"""

from .errors import (
    ConfigError,
    CycleDetected,
    GameError,
    InvalidGameError,
    InvalidStateError,
    NoPureNash,
    NotATree,
    NotHomogeneousError,
    NotPureNashError,
    NotTwoResourceGame,
    NotUndirectedError,
    ResourceUnavailableError,
    StateSpaceTooLarge,
    WirelessPlacementError,
)
from .interfaces import Game, PayoffFunction, SpatialMatrix, State, StructureReport
from .payoffs import DecreasingCubic, NegLinear, Reciprocal, Shannon, Shifted, payoff_from_params

from .engine.game import (
    better_response_set,
    check_equilibrium_congestion_bound,
    classify_structure,
    congestion_level,
    congestion_vector,
    improvement_mask,
    is_better_response,
    is_pure_nash,
    is_resource_homogeneous,
    payoff,
    payoff_vector,
    state_report,
    total_congestion,
)
from .engine.dynamics import Converged, RunOutcome, TimedOut, UpdateRule, run, step
from .engine.potentials import (
    compute_thresholds,
    congestion_delta_identity_check,
    potential_two_resource,
    two_resource_delta,
)
from .engine.solvers import best_response, solve_dag, solve_directed_tree, topological_sort
from .engine.statespace import (
    STATE_COUNT_CAP,
    TransitionGraph,
    build_transition_graph,
    enumerate_states,
    find_all_pne,
    find_trapping_run,
    has_fip,
    min_total_congestion_states,
    reachability_analysis,
    transition_graph_fragment,
)
from .engine.reduction import coloring_reduction, is_proper_coloring, optimal_pne_total_payoff
from .engine.generators import (
    gen_directed_weighted,
    gen_heterogeneous_payoffs,
    gen_homogeneous_payoffs,
    gen_odd_directed_cycle,
    gen_random_dag,
    gen_random_directed_tree,
    gen_undirected_uniform,
    gen_undirected_weighted,
)
from .engine.wireless import WirelessScenario, gen_wireless, interference_asymmetry, mean_transmission_rate
from .engine.experiments import BatchReport, ExperimentConfig, run_batch, sweep
from .serialization import load_game, save_game

__all__ = [
    # Model
    "Game",
    "PayoffFunction",
    "SpatialMatrix",
    "State",
    "StructureReport",
    "DecreasingCubic",
    "NegLinear",
    "Reciprocal",
    "Shannon",
    "Shifted",
    "payoff_from_params",
    # Errors
    "GameError",
    "InvalidGameError",
    "InvalidStateError",
    "ResourceUnavailableError",
    "CycleDetected",
    "NotATree",
    "NotTwoResourceGame",
    "NotUndirectedError",
    "NotHomogeneousError",
    "NotPureNashError",
    "NoPureNash",
    "StateSpaceTooLarge",
    "WirelessPlacementError",
    "ConfigError",
    # Per-state evaluation
    "congestion_level",
    "congestion_vector",
    "payoff",
    "payoff_vector",
    "is_better_response",
    "better_response_set",
    "improvement_mask",
    "is_pure_nash",
    "total_congestion",
    "classify_structure",
    "check_equilibrium_congestion_bound",
    "is_resource_homogeneous",
    "state_report",
    # Dynamics and potentials
    "UpdateRule",
    "RunOutcome",
    "Converged",
    "TimedOut",
    "step",
    "run",
    "compute_thresholds",
    "potential_two_resource",
    "two_resource_delta",
    "congestion_delta_identity_check",
    # Solvers
    "topological_sort",
    "best_response",
    "solve_dag",
    "solve_directed_tree",
    # State space
    "STATE_COUNT_CAP",
    "TransitionGraph",
    "enumerate_states",
    "find_all_pne",
    "build_transition_graph",
    "has_fip",
    "reachability_analysis",
    "transition_graph_fragment",
    "find_trapping_run",
    "min_total_congestion_states",
    "coloring_reduction",
    "optimal_pne_total_payoff",
    "is_proper_coloring",
    # Generators
    "gen_undirected_uniform",
    "gen_undirected_weighted",
    "gen_directed_weighted",
    "gen_heterogeneous_payoffs",
    "gen_homogeneous_payoffs",
    "gen_random_directed_tree",
    "gen_random_dag",
    "gen_odd_directed_cycle",
    "WirelessScenario",
    "gen_wireless",
    "interference_asymmetry",
    "mean_transmission_rate",
    # Experiments and files
    "ExperimentConfig",
    "BatchReport",
    "run_batch",
    "sweep",
    "load_game",
    "save_game",
]
