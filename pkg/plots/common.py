"""Shared CSV loading and aggregation for the figure scripts."""

import sys

import pandas as pd

TRIAL_COLUMNS = [
    "trial",
    "t",
    "algorithm",
    "comparator",
    "regret_lin",
    "regret_true",
    "wealth",
    "bet",
    "iterate_norm",
    "ceiling",
]


def fail(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(2)


def load_trials(path: str) -> pd.DataFrame:
    try:
        df = pd.read_csv(path)
    except FileNotFoundError:
        fail(f"no such file: {path}")
    except pd.errors.EmptyDataError:
        fail(f"{path} has no header row")
    if list(df.columns) != TRIAL_COLUMNS:
        fail(f"{path} does not match the trial-record schema")
    if df.empty:
        fail(f"{path} contains no data rows")
    return df


def mean_se(df: pd.DataFrame, value: str, by: list) -> pd.DataFrame:
    """Across-trial mean and standard error of ``value`` per group."""
    g = df.groupby(by)[value]
    out = g.agg(["mean", "sem", "count"]).reset_index()
    out["sem"] = out["sem"].fillna(0.0)
    return out
