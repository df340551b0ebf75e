"""Figure rendering for the CLI report paths.

Everything draws through the Agg backend into a file; nothing here opens
a window. Sizes follow the usual golden-ratio column layout.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_WIDTH = 6.4  # inches

PARAMS = {
    "figure.figsize": (_WIDTH, _WIDTH * _GOLDEN),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

matplotlib.rcParams.update(PARAMS)


def mixing_figure(reports, path) -> None:
    """Upper and lower mixing bounds across the sweep, log scale."""
    rows = sorted(reports, key=lambda r: r.c)
    cs = [r.c for r in rows]
    fig, ax = plt.subplots()
    ax.semilogy(cs, [r.tv_upper for r in rows], "o-", label="tv upper bound")
    ax.semilogy(cs, [r.l2_sq for r in rows], "s--", label="squared L2 bound")
    positive = [(r.c, r.lower_term) for r in rows if r.lower_term > 0]
    if positive:
        ax.semilogy(*zip(*positive), "^:", label="lower-bound term")
    ax.set_xlabel("c  (m = (log d + c)/2)")
    ax.set_ylabel("bound value")
    ax.set_title(f"mixing bounds, d = {rows[0].d}")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def stationary_figure(report, path) -> None:
    """Integer stationary vector by residue, forced zeroes marked."""
    if report.pi_tilde is None:
        raise ValueError("non-unique stationary report has no vector to draw")
    fig, ax = plt.subplots()
    ax.bar(range(report.p), report.pi_tilde, width=1.0, align="center")
    if report.predicted_zero_set:
        ax.plot(report.predicted_zero_set,
                [0] * len(report.predicted_zero_set),
                "rx", markersize=4, label="forced zero")
        ax.legend()
    ax.set_xlabel("residue j")
    ax.set_ylabel("integer stationary weight")
    ax.set_title(f"p = {report.p}")
    fig.savefig(path)
    plt.close(fig)


def census_figure(census, path) -> None:
    """Zero proportion per prime, split by residue class mod 4."""
    fig, ax = plt.subplots()
    for cls, marker in ((1, "o"), (3, "s")):
        pts = [(r.p, r.zero_count / r.p) for r in census.rows
               if r.residue_class == cls and r.unique]
        if pts:
            ax.plot(*zip(*pts), marker, markersize=3,
                    linestyle="none", label=f"p = {cls} (mod 4)")
    ax.axhline(0.25, color="k", linewidth=0.8, linestyle="--",
               label="quarter of residues")
    ax.set_xlabel("p")
    ax.set_ylabel("fraction of zero entries")
    ax.set_title("stationary zero census")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def matrix_figure(K, path) -> None:
    """Transition probabilities as a heat map (small chains only)."""
    dense = [[float(x) for x in row] for row in K.dense()]
    fig, ax = plt.subplots()
    image = ax.imshow(dense, cmap="Blues", vmin=0.0)
    fig.colorbar(image, ax=ax, label="probability")
    if K.n <= 32:
        ax.set_xticks(range(K.n), K.states, rotation=90)
        ax.set_yticks(range(K.n), K.states)
    ax.grid(False)
    ax.set_title("transition matrix")
    fig.savefig(path)
    plt.close(fig)


def simulate_figure(empirical, exact, path) -> None:
    """Empirical frequencies with the exact law overlaid when known."""
    n = len(empirical.states)
    fig, ax = plt.subplots()
    ax.bar(range(n), [float(v) for v in empirical.values],
           width=1.0, align="center", label="empirical")
    if exact is not None:
        ax.plot(range(n), [float(v) for v in exact.values],
                "k.", markersize=3, label="exact")
    ax.set_xlabel("state index")
    ax.set_ylabel("probability")
    ax.set_title(f"simulated law over {n} states")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
