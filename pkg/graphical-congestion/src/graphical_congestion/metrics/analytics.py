from __future__ import annotations

from typing import Any, Dict, Iterable, List, Sequence

import pandas as pd

TRIAL_COLUMNS = ["trial", "seed", "converged", "slots"]


def trials_frame(records: Iterable[Any]) -> pd.DataFrame:
    """One row per trial. ``slots`` is a nullable integer, missing when a trial timed out."""
    rows = [
        {"trial": r.trial, "seed": r.seed, "converged": r.converged, "slots": r.slots}
        for r in records
    ]
    df = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    df["trial"] = df["trial"].astype("int64")
    df["seed"] = df["seed"].astype("uint64")
    df["converged"] = df["converged"].astype(bool)
    df["slots"] = df["slots"].astype("Int64")
    return df


def fast_fraction(df: pd.DataFrame, threshold: int) -> float:
    """Share of all trials that converged within ``threshold`` slots."""
    if df.empty:
        return 0.0
    fast = df["converged"] & (df["slots"].fillna(threshold + 1) <= threshold)
    return float(fast.sum()) / len(df)


def slot_histogram(df: pd.DataFrame) -> List[List[int]]:
    """Unit-width bins over converged trials as sorted ``[slots, count]`` pairs."""
    slots = df.loc[df["converged"], "slots"].astype("int64")
    counts = slots.value_counts().sort_index()
    return [[int(s), int(c)] for s, c in counts.items()]


def summarize_batch(df: pd.DataFrame, threshold: int) -> Dict[str, Any]:
    """Aggregates over a batch; slot statistics use converged trials only."""
    converged = df.loc[df["converged"], "slots"].astype("int64")
    n = len(df)
    some = not converged.empty
    return {
        "n_trials": n,
        "n_converged": int(df["converged"].sum()),
        "converged_fraction": float(df["converged"].mean()) if n else 0.0,
        "mean_slots": float(converged.mean()) if some else None,
        "median_slots": float(converged.median()) if some else None,
        "max_slots_observed": int(converged.max()) if some else None,
        "fast_fraction": fast_fraction(df, threshold),
        "histogram": slot_histogram(df),
    }


def sweep_table(reports: Sequence[Any], axis: str) -> pd.DataFrame:
    """Plot-ready table with one row per swept value."""
    rows = [
        {
            axis: r.axis_value,
            "n_trials": r.n_trials,
            "n_converged": r.n_converged,
            "converged_fraction": r.converged_fraction,
            "fast_fraction": r.fast_fraction,
            "mean_slots": r.mean_slots,
        }
        for r in reports
    ]
    return pd.DataFrame(rows)


def slot_distribution(reports: Sequence[Any], axis: str) -> pd.DataFrame:
    """Convergence time of every converged trial against the swept value."""
    rows = [
        {axis: r.axis_value, "trial": rec.trial, "slots": rec.slots}
        for r in reports
        for rec in r.records
        if rec.converged
    ]
    return pd.DataFrame(rows, columns=[axis, "trial", "slots"])


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation: Pearson correlation of average ranks."""
    rx = pd.Series(x, dtype=float).rank()
    ry = pd.Series(y, dtype=float).rank()
    return float(rx.corr(ry))
