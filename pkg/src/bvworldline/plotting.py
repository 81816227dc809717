"""PNG summary of a check run: one horizontal bar per check, coloured by status."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STATUS_COLORS = {
    "pass": "#4c9a2a",
    "fail": "#c0392b",
    "infeasible_at_bounds": "#e0a030",
    "skipped": "#9e9e9e",
}


def plot_reports(reports: Sequence, path: str, title: str = "verification run") -> str:
    """Bar chart of durations (seconds, log scale); returns ``path``."""
    if not reports:
        raise ValueError("nothing to plot")
    names = [r.check_id for r in reports]
    secs = [max(r.duration_ms, 1) / 1000 for r in reports]
    colors = [STATUS_COLORS.get(r.status, "black") for r in reports]

    fig, ax = plt.subplots(figsize=(7.5, 0.28 * len(reports) + 1.4))
    y = range(len(reports))
    ax.barh(y, secs, color=colors)
    ax.set_yticks(list(y))
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("duration [s]")
    ax.set_title(title, fontsize=9)
    for s, c in STATUS_COLORS.items():
        ax.bar(0, 0, color=c, label=s)
    ax.legend(fontsize=7, loc="lower right", frameon=False)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
