"""Figure rendering for analysis reports.

Renders matplotlib charts to image files next to the textual report output.
Import stays out of the package root so the plotting stack only loads when
a figure is actually requested.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from tmforge.report import FrequencyReport  # noqa: E402
from tmforge.rules import CATEGORY_METHOD, ThreatCategory, ThreatMethod  # noqa: E402

_METHOD_COLORS = {
    ThreatMethod.STRIDE: "#1f77b4",
    ThreatMethod.VAST: "#ff7f0e",
}


def render_frequency_figure(freq: FrequencyReport, path: str | Path) -> Path:
    """Write a two-panel frequency chart (per category, per zone).

    The file format follows the path suffix (.png, .svg, ...). Returns the
    path written.
    """
    path = Path(path)
    categories = list(ThreatCategory)
    counts = [freq.per_category.get(c, 0) for c in categories]
    colors = [_METHOD_COLORS[CATEGORY_METHOD[c]] for c in categories]

    fig, (ax_cat, ax_zone) = plt.subplots(1, 2, figsize=(13, 5))

    positions = range(len(categories))
    ax_cat.bar(positions, counts, color=colors)
    ax_cat.set_xticks(list(positions))
    ax_cat.set_xticklabels([c.value for c in categories], rotation=45, ha="right")
    ax_cat.set_ylabel("Findings")
    ax_cat.set_title("Findings per category")
    for x, count in zip(positions, counts):
        if count:
            ax_cat.text(x, count, str(count), ha="center", va="bottom", fontsize=8)
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=_METHOD_COLORS[m]) for m in ThreatMethod
    ]
    ax_cat.legend(handles, [m.value for m in ThreatMethod], frameon=False)

    zones = list(freq.per_zone)
    totals = [sum(freq.per_zone[z].values()) for z in zones]
    ax_zone.bar(range(len(zones)), totals, color="#2ca02c")
    ax_zone.set_xticks(range(len(zones)))
    ax_zone.set_xticklabels(zones, rotation=45, ha="right")
    ax_zone.set_ylabel("Findings")
    ax_zone.set_title("Findings per zone")
    for x, count in zip(range(len(zones)), totals):
        ax_zone.text(x, count, str(count), ha="center", va="bottom", fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
