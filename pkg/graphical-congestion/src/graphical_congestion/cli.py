"""Command-line front end: ``gcgwe <command> ...``.

Results go to stdout as JSON unless ``--out`` names a file. Library errors
are reported as ``error: <message>`` on stderr with exit status 2.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
import math
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .engine.dynamics import DEFAULT_MAX_SLOTS, UpdateRule, run
from .engine.experiments import (
    BatchReport,
    ExperimentConfig,
    initial_state,
    run_batch,
    sweep,
)
from .engine.game import (
    check_equilibrium_congestion_bound,
    classify_structure,
    is_pure_nash,
    state_report,
)
from .engine.generators import (
    SPATIAL_GENERATORS,
    assemble_game,
    gen_heterogeneous_payoffs,
    gen_homogeneous_payoffs,
    gen_odd_directed_cycle,
    gen_random_dag,
)
from .engine.reduction import coloring_reduction, is_proper_coloring, optimal_pne_total_payoff
from .engine.solvers import solve_dag, solve_directed_tree
from .engine.statespace import (
    build_transition_graph,
    has_fip,
    reachability_analysis,
    transition_graph_fragment,
)
from .engine.wireless import gen_wireless, interference_asymmetry
from .errors import ConfigError, GameError, InvalidStateError
from .interfaces import Game, State
from .metrics.analytics import slot_distribution, spearman, sweep_table
from .serialization import (
    game_to_dict,
    load_game,
    load_graph,
    save_game,
    transition_graph_to_dict,
    transition_graph_to_dot,
    trials_to_csv,
    write_trajectory,
)

logger = logging.getLogger(__name__)

TRAJECTORY_TAIL = 10
# how non-finite floats (a reciprocal payoff at zero congestion) appear in JSON output
NON_FINITE_TEXT = {math.inf: "inf", -math.inf: "-inf"}
# wireless sweeps default to 20 users on 5 channels, 200 trials of at most 500 slots
WIRELESS_DEFAULTS = ExperimentConfig(kind="wireless-batch", n_players=20, n_resources=5, trials=200, max_slots=500)


# ---------------------------------------------------------------------------
# Commands (return plain dicts so they can be tested without a shell)
# ---------------------------------------------------------------------------

def cmd_solve(game: Game, method: str, seed: int = 0, max_slots: int = DEFAULT_MAX_SLOTS) -> Dict[str, Any]:
    result: Dict[str, Any] = {"method": method, "structure": dataclasses.asdict(classify_structure(game.spatial))}
    if method == "dag":
        state = solve_dag(game)
    elif method == "tree":
        state = solve_directed_tree(game)
    elif method == "dynamics":
        outcome = run(game, rule=UpdateRule(seed=seed, max_slots=max_slots, record_trajectory=True))
        state = outcome.final_state
        result["status"] = "converged" if outcome.converged else "timed_out"
        result["slots"] = outcome.slots
        result["trajectory_tail"] = [r.to_dict() for r in outcome.trajectory[-TRAJECTORY_TAIL:]]
    else:
        raise GameError(f"Unknown method: {method}")

    pne = is_pure_nash(game, state)
    result["state"] = list(state.choices)
    result["is_pure_nash"] = pne
    result["players"] = state_report(game, state).to_dict(orient="records")
    if game.homogeneous and pne:
        result["congestion_bound"] = [dataclasses.asdict(b) for b in check_equilibrium_congestion_bound(game, state)]
    return json_safe(result)


def cmd_analyze(
    game: Game,
    cap: Optional[int] = None,
    dot_path: Optional[Path] = None,
    json_path: Optional[Path] = None,
    depth: Optional[int] = None,
) -> Dict[str, Any]:
    """State-space summary; the trap report starts from everybody on their lowest resource."""
    graph = build_transition_graph(game, cap)
    start = game.initial_state()
    reach = reachability_analysis(game, start, graph=graph)
    result = {
        "n_states": graph.n_states,
        "n_edges": graph.n_edges,
        "pne_count": int(graph.pne_indices.size),
        "pne": [list(graph.state(i).choices) for i in graph.pne_indices.tolist()],
        "has_fip": has_fip(game, graph=graph),
        "initial": list(start.choices),
        "pne_reachable": reach.pne_reachable,
        "trap_size": len(reach.trap) if reach.trap else 0,
        "trap": [list(graph.state(i).choices) for i in sorted(reach.trap)] if reach.trap else [],
    }
    if dot_path is not None:
        shown = transition_graph_fragment(graph, reach.initial, depth) if depth is not None else graph
        Path(dot_path).write_text(transition_graph_to_dot(shown, initial=reach.initial), encoding="utf-8")
    if json_path is not None:
        Path(json_path).write_text(json.dumps(transition_graph_to_dict(graph)), encoding="utf-8")
    return result


def cmd_reduction(adjacency: np.ndarray, cap: Optional[int] = None) -> Dict[str, Any]:
    game = coloring_reduction(adjacency)
    state, total = optimal_pne_total_payoff(game, cap)
    return {
        "n_vertices": game.n_players,
        "n_edges": int(np.count_nonzero(np.triu(game.weights))),
        "optimal_total_payoff": total,
        "state": list(state.choices),
        "three_colorable": total == 0,
        "proper_coloring": is_proper_coloring(adjacency, state),
    }


# ---------------------------------------------------------------------------
# argparse plumbing
# ---------------------------------------------------------------------------

def json_safe(value: Any) -> Any:
    """Copy of ``value`` with infinite floats as "inf" / "-inf" and NaN as None."""
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else NON_FINITE_TEXT[value]
    return value


def _emit(payload: Any, out: Optional[Path]) -> None:
    text = payload if isinstance(payload, str) else json.dumps(json_safe(payload), indent=2, allow_nan=False)
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(f"Wrote {out}", file=sys.stderr)


def _parse_state(text: str) -> State:
    try:
        return State(tuple(int(r) for r in text.split(",")))
    except ValueError:
        raise InvalidStateError(f"Cannot parse state {text!r}; expected comma-separated resources") from None


# Flags that map onto ExperimentConfig fields; None means "not given".
_OVERRIDES = {
    "kind": "kind",
    "players": "n_players",
    "resources": "n_resources",
    "spatial": "spatial_generator",
    "payoffs": "payoff_family",
    "region_length": "region_length",
    "trials": "trials",
    "seed": "base_seed",
    "max_slots": "max_slots",
    "fast_threshold": "fast_threshold",
    "initial": "initial",
    "workers": "workers",
}


def _experiment_config(args: argparse.Namespace, base: Optional[ExperimentConfig] = None, **forced: Any) -> ExperimentConfig:
    config = base if base is not None else ExperimentConfig()
    if getattr(args, "config", None):
        config = ExperimentConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    overrides = {field: getattr(args, flag) for flag, field in _OVERRIDES.items() if getattr(args, flag, None) is not None}
    overrides.update(forced)
    return dataclasses.replace(config, **overrides)


def _batch_output(report: BatchReport, fmt: str) -> str:
    if fmt == "csv":
        return trials_to_csv(report.records)
    return report.to_json(indent=2) + "\n"


def _sweep_output(reports: List[BatchReport], axis: str, fmt: str) -> str:
    if fmt == "csv":
        return sweep_table(reports, axis).to_csv(index=False)
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def _log_trend(reports: List[BatchReport], axis: str) -> None:
    if len(reports) > 1:
        rho = spearman([r.axis_value for r in reports], [r.converged_fraction for r in reports])
        logger.info("rank correlation of converged fraction with %s: %.3f", axis, rho)


def _handle_generate(args: argparse.Namespace) -> None:
    rng = np.random.default_rng(args.seed)
    if args.kind == "wireless":
        scenario, game = gen_wireless(args.players, args.resources, args.region_length, rng)
        payload = scenario.to_dict()
        payload["game"] = game_to_dict(game)
        payload["asymmetry"] = interference_asymmetry(game.spatial)
        _emit(payload, args.out)
        return
    if args.kind == "odd-cycle":
        weights = 1.0 - rng.random(args.players) if args.random_weights else 1.0
        game = gen_odd_directed_cycle(args.players, weights, args.resources)
    else:
        if args.kind == "dag":
            spatial = gen_random_dag(args.players, args.edge_prob, rng)
        else:
            spatial = SPATIAL_GENERATORS[args.kind](args.players, rng)
        if args.payoffs == "homogeneous":
            payoffs = gen_homogeneous_payoffs(args.players, args.resources)
        else:
            payoffs = gen_heterogeneous_payoffs(args.players, args.resources, rng)
        game = assemble_game(spatial, args.resources, payoffs)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_game(game, args.out)
        print(f"Wrote {args.out}", file=sys.stderr)
    else:
        _emit(game_to_dict(game), None)


def _handle_run(args: argparse.Namespace) -> None:
    game = load_game(args.game)
    rng = np.random.default_rng(args.seed)
    if args.initial in (None, "ones"):
        start = game.initial_state()
    elif args.initial == "random":
        start = initial_state(game, "random", rng)
    else:
        start = _parse_state(args.initial)
    rule = UpdateRule(
        seed=args.seed,
        max_slots=args.max_slots,
        record_trajectory=args.trajectory is not None,
        best_response=args.best_response,
    )
    outcome = run(game, start, rule, rng=rng)
    if args.trajectory is not None:
        write_trajectory(outcome.trajectory, args.trajectory)
    _emit(
        {
            "status": "converged" if outcome.converged else "timed_out",
            "slots": outcome.slots,
            "initial": list(start.choices),
            "final_state": list(outcome.final_state.choices),
            "is_pure_nash": is_pure_nash(game, outcome.final_state),
        },
        args.out,
    )


def _emit_results(args: argparse.Namespace, config: ExperimentConfig, as_text: Callable[[str], str]) -> None:
    """``--out`` wins; otherwise the config's out_json / out_csv; otherwise stdout."""
    if args.out is None and (config.out_json or config.out_csv):
        for path, fmt in ((config.out_json, "json"), (config.out_csv, "csv")):
            if path:
                _emit(as_text(fmt), Path(path))
        return
    _emit(as_text(args.format), args.out)


def _handle_batch(args: argparse.Namespace) -> None:
    config = _experiment_config(args)
    report = run_batch(config)
    _emit_results(args, config, lambda fmt: _batch_output(report, fmt))


def _handle_sweep(args: argparse.Namespace) -> None:
    config = _experiment_config(args)
    reports = sweep(config, args.axis, args.values)
    _log_trend(reports, args.axis)
    if args.slots_out is not None:
        _emit(slot_distribution(reports, args.axis).to_csv(index=False), args.slots_out)
    _emit_results(args, config, lambda fmt: _sweep_output(reports, args.axis, fmt))


def _handle_wireless(args: argparse.Namespace) -> None:
    config = _experiment_config(args, WIRELESS_DEFAULTS, kind="wireless-batch")
    reports = sweep(config, "region_length", args.lengths)
    _log_trend(reports, "region_length")
    if args.slots_out is not None:
        _emit(slot_distribution(reports, "region_length").to_csv(index=False), args.slots_out)
    _emit_results(args, config, lambda fmt: _sweep_output(reports, "region_length", fmt))


def _job_config(args: argparse.Namespace, kind: str) -> ExperimentConfig:
    """Config of a single-game command; a ``--config`` file must be of the command's kind."""
    if args.config is None:
        return ExperimentConfig(kind=kind)
    config = ExperimentConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    if config.kind != kind:
        raise ConfigError(f"'{args.command}' needs a config of kind {kind!r}, got {config.kind!r}")
    return config


def _input_path(given: Optional[Path], configured: Optional[str], what: str) -> Path:
    if given is not None:
        return given
    if configured is None:
        raise ConfigError(f"No {what} on the command line or in the config")
    return Path(configured)


def _output_path(args: argparse.Namespace, config: ExperimentConfig) -> Optional[Path]:
    if args.out is not None:
        return args.out
    return Path(config.out_json) if config.out_json else None


def _pick(given: Any, configured: Any) -> Any:
    return configured if given is None else given


def _handle_solve(args: argparse.Namespace) -> None:
    config = _job_config(args, "solve")
    game = load_game(_input_path(args.game, config.game_path, "game file"))
    result = cmd_solve(
        game,
        _pick(args.method, config.method),
        _pick(args.seed, config.base_seed),
        _pick(args.max_slots, config.max_slots),
    )
    _emit(result, _output_path(args, config))


def _handle_analyze(args: argparse.Namespace) -> None:
    config = _job_config(args, "statespace")
    game = load_game(_input_path(args.game, config.game_path, "game file"))
    _emit(cmd_analyze(game, args.cap, args.dot, args.graph_json, args.depth), _output_path(args, config))


def _handle_reduce(args: argparse.Namespace) -> None:
    config = _job_config(args, "reduction")
    adjacency = load_graph(_input_path(args.graph, config.graph_path, "graph file"))
    _emit(cmd_reduction(adjacency, args.cap), _output_path(args, config))


def _add_experiment_flags(p: argparse.ArgumentParser, with_kind: bool = True) -> None:
    p.add_argument("--config", type=Path, help="ExperimentConfig JSON; flags override its values")
    if with_kind:
        p.add_argument("--kind", choices=["random-batch", "wireless-batch"])
    p.add_argument("--players", type=int)
    p.add_argument("--resources", type=int)
    p.add_argument("--spatial", choices=sorted(SPATIAL_GENERATORS))
    p.add_argument("--payoffs", choices=["heterogeneous", "homogeneous"])
    p.add_argument("--region-length", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-slots", type=int)
    p.add_argument("--fast-threshold", type=int)
    p.add_argument("--initial", choices=["ones", "random"])
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out", type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcgwe", description="Graphical congestion games with weighted edges")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random or structured game")
    p.add_argument("--kind", default="undirected-weighted",
                   choices=sorted(SPATIAL_GENERATORS) + ["dag", "odd-cycle", "wireless"])
    p.add_argument("--players", type=int, default=6)
    p.add_argument("--resources", type=int, default=3)
    p.add_argument("--payoffs", choices=["heterogeneous", "homogeneous"], default="heterogeneous")
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--random-weights", action="store_true", help="odd-cycle: weights in (0, 1] instead of 1")
    p.add_argument("--region-length", type=float, default=200.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_handle_generate)

    p = sub.add_parser("run", help="better-response dynamics on a game file")
    p.add_argument("game", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-slots", type=int, default=DEFAULT_MAX_SLOTS)
    p.add_argument("--initial", help="'ones', 'random' or comma-separated resources")
    p.add_argument("--best-response", action="store_true")
    p.add_argument("--trajectory", type=Path, help="JSON-lines trajectory output")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_handle_run)

    p = sub.add_parser("batch", help="seeded batch of random trials")
    _add_experiment_flags(p)
    p.set_defaults(handler=_handle_batch)

    p = sub.add_parser("sweep", help="one batch per value of an axis")
    _add_experiment_flags(p)
    p.add_argument("--axis", required=True, choices=["players", "resources", "region_length"])
    p.add_argument("--values", required=True, type=float, nargs="+")
    p.add_argument("--slots-out", type=Path, help="CSV of convergence times per axis value")
    p.set_defaults(handler=_handle_sweep)

    p = sub.add_parser("wireless", help="wireless batches over region lengths")
    _add_experiment_flags(p, with_kind=False)
    p.add_argument("--lengths", type=float, nargs="+", default=[float(v) for v in range(50, 501, 50)])
    p.add_argument("--slots-out", type=Path, help="CSV of convergence times per region length")
    p.set_defaults(handler=_handle_wireless)

    p = sub.add_parser("solve", help="construct or search for a pure Nash equilibrium")
    p.add_argument("game", type=Path, nargs="?", help="game file; defaults to the config's game_path")
    p.add_argument("--config", type=Path, help="ExperimentConfig JSON of kind 'solve'")
    p.add_argument("--method", choices=["dag", "tree", "dynamics"], help="default: dynamics")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-slots", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_handle_solve)

    p = sub.add_parser("analyze", help="exhaustive state-space report")
    p.add_argument("game", type=Path, nargs="?", help="game file; defaults to the config's game_path")
    p.add_argument("--config", type=Path, help="ExperimentConfig JSON of kind 'statespace'")
    p.add_argument("--cap", type=int)
    p.add_argument("--dot", type=Path, help="DOT rendering of the state graph")
    p.add_argument("--graph-json", type=Path, help="state graph as JSON")
    p.add_argument("--depth", type=int, help="limit the DOT output to this many hops from the initial state")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_handle_analyze)

    p = sub.add_parser("reduce", help="3-colourability through the congestion-game reduction")
    p.add_argument("graph", type=Path, nargs="?", help="graph file; defaults to the config's graph_path")
    p.add_argument("--config", type=Path, help="ExperimentConfig JSON of kind 'reduction'")
    p.add_argument("--cap", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_handle_reduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.handler(args)
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
