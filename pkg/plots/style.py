"""Fixed styling shared by the figure scripts; no interactivity, stable output."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (6.4, 4.2)
DPI = 120
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

plt.rcParams.update(
    {
        "figure.figsize": FIGSIZE,
        "figure.dpi": DPI,
        "savefig.dpi": DPI,
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "legend.fontsize": 8,
    }
)


def save(fig, out_path: str) -> None:
    """Write the PNG without the version-bearing metadata chunk so repeated
    renders are byte-identical."""
    fig.savefig(out_path, metadata={"Software": None})
    plt.close(fig)
