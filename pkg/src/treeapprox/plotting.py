"""Figure rendering for CLI reports.

Figures are written straight to files (Agg backend); nothing here affects
the numeric content of a report.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metric import MetricSpace, chain_components  # noqa: E402
from .trees import WeightedTree, tree_metric  # noqa: E402


def distortion_figure(
    X: MetricSpace, T: WeightedTree, path: str | Path, bound: Fraction | None = None
) -> None:
    """Scatter of tree distance against metric distance for every pair."""
    dt = tree_metric(T)
    pos = {lbl: k for k, lbl in enumerate(T.vertices)}
    xs, ys = [], []
    for i, j in X.pairs():
        xs.append(float(X.dist[i][j]))
        ys.append(float(dt[pos[X.points[i]]][pos[X.points[j]]]))
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(xs, ys, s=12, alpha=0.6)
    top = max(xs + ys) * 1.05
    ax.plot([0, top], [0, top], lw=1, color="gray", label="no expansion")
    if bound is not None:
        ax.plot(
            [0, top],
            [0, float(bound) * top],
            lw=1,
            ls="--",
            color="red",
            label=f"bound {float(bound):g}x",
        )
    ax.set_xlabel("metric distance")
    ax.set_ylabel("tree distance")
    ax.set_xlim(0, top)
    ax.set_ylim(0, top * max(1.0, float(bound) if bound else 1.0))
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def scale_profile_figure(X: MetricSpace, path: str | Path) -> None:
    """Per-scale profile max_B diam(B)/s over the distinct distance values;
    the curve's maximum is the dimension-zero constant."""
    xs, ys = [], []
    for s in X.distinct_distances():
        part = chain_components(X, s)
        worst = Fraction(0)
        for b in part.blocks:
            for i in b:
                for j in b:
                    if X.dist[i][j] > worst:
                        worst = X.dist[i][j]
        xs.append(float(s))
        ys.append(float(worst / s))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(xs, ys, marker="o", ms=4)
    ax.set_xscale("log")
    ax.set_xlabel("scale s")
    ax.set_ylabel("max block diameter / s")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
