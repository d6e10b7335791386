#!/usr/bin/env python3
"""Final-round regret vs comparator norm, one fitted slope per algorithm.

Usage: plot_scaling.py <trials.csv> <out.png>

The log-log slope separates learners whose regret grows quadratically in the
comparator norm from the parameter-free ones that stay near-linear.
"""

import sys

import numpy as np

import style
from common import fail, load_trials, mean_se


def main(argv) -> int:
    if len(argv) != 3:
        fail("usage: plot_scaling.py <trials.csv> <out.png>")
    df = load_trials(argv[1])
    import matplotlib.pyplot as plt

    final_t = df["t"].max()
    final = df[df["t"] == final_t]
    fig, ax = plt.subplots()
    for i, (algo, block) in enumerate(sorted(final.groupby("algorithm"))):
        agg = mean_se(block, "regret_lin", ["comparator"]).sort_values("comparator")
        us = agg["comparator"].to_numpy()
        means = np.maximum(agg["mean"].to_numpy(), 1e-12)
        color = style.COLORS[i % len(style.COLORS)]
        label = algo
        if len(us) >= 2 and np.all(us > 0):
            slope = np.polyfit(np.log(us), np.log(means), 1)[0]
            label = f"{algo} (slope {slope:.2f})"
        ax.errorbar(us, means, yerr=agg["sem"], color=color, marker="o", capsize=3, label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("comparator norm")
    ax.set_ylabel(f"expected linearized regret at t={final_t}")
    ax.legend()
    fig.tight_layout()
    style.save(fig, argv[2])
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
