#!/usr/bin/env python3
"""Expected regret vs horizon with error bands and the theoretical ceiling.

Usage: plot_regret.py <trials.csv> <out.png>

One panel per comparator; each algorithm gets a mean curve with a +-SE band,
and the betting learner's dual ceiling is overlaid as a dashed line.
"""

import sys

import numpy as np

import style
from common import fail, load_trials, mean_se


def main(argv) -> int:
    if len(argv) != 3:
        fail("usage: plot_regret.py <trials.csv> <out.png>")
    df = load_trials(argv[1])
    import matplotlib.pyplot as plt

    comparators = sorted(df["comparator"].unique())
    fig, axes = plt.subplots(
        1, len(comparators), figsize=(style.FIGSIZE[0] * len(comparators) / 1.6, style.FIGSIZE[1]),
        squeeze=False,
    )
    for ax, comp in zip(axes[0], comparators):
        sub = df[df["comparator"] == comp]
        for i, (algo, block) in enumerate(sorted(sub.groupby("algorithm"))):
            agg = mean_se(block, "regret_lin", ["t"]).sort_values("t")
            color = style.COLORS[i % len(style.COLORS)]
            ax.plot(agg["t"], agg["mean"], color=color, label=algo)
            ax.fill_between(
                agg["t"], agg["mean"] - agg["sem"], agg["mean"] + agg["sem"],
                color=color, alpha=0.25, linewidth=0,
            )
            ceil = block.groupby("t")["ceiling"].first()
            if np.isfinite(ceil.to_numpy()).all():
                ax.plot(ceil.index, ceil.to_numpy(), color=color, linestyle="--", alpha=0.7,
                        label=f"{algo} ceiling")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("round t")
        ax.set_title(f"comparator {comp:g}")
        ax.legend()
    axes[0][0].set_ylabel("expected linearized regret")
    fig.tight_layout()
    style.save(fig, argv[2])
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
