#!/usr/bin/env python3
"""Anytime-coverage simulation results against their confidence budget.

Usage: plot_coverage.py <coverage.csv> <out.png>

Bars show the measured violation rate per simulation kind with a 3-SE
whisker; the horizontal line is the nominal failure budget delta.
"""

import sys

import pandas as pd

import style
from common import fail

COVERAGE_COLUMNS = ["kind", "paths", "T", "delta", "rate", "se"]


def main(argv) -> int:
    if len(argv) != 3:
        fail("usage: plot_coverage.py <coverage.csv> <out.png>")
    try:
        df = pd.read_csv(argv[1])
    except FileNotFoundError:
        fail(f"no such file: {argv[1]}")
    except pd.errors.EmptyDataError:
        fail(f"{argv[1]} has no header row")
    if list(df.columns) != COVERAGE_COLUMNS:
        fail(f"{argv[1]} does not match the coverage schema")
    if df.empty:
        fail(f"{argv[1]} contains no data rows")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    xs = range(len(df))
    ax.bar(xs, df["rate"], yerr=3.0 * df["se"], capsize=4, color=style.COLORS[0], alpha=0.8)
    delta = float(df["delta"].iloc[0])
    ax.axhline(delta, color=style.COLORS[1], linestyle="--", label=f"budget delta={delta:g}")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(df["kind"])
    ax.set_ylabel("violation rate")
    ax.set_title(f"{int(df['paths'].iloc[0])} paths, T={int(df['T'].iloc[0])}")
    ax.legend()
    fig.tight_layout()
    style.save(fig, argv[2])
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
