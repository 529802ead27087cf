"""Static SVG line charts for the experiment runners.

Charts are convenience renderings next to the canonical CSV output: fixed
800x600 viewBox, log axes where requested, no scripting.  Long curves are
thinned before plotting; the CSV keeps full resolution.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

matplotlib.rcParams["svg.hashsalt"] = "biphaselab"

MAX_POINTS_PER_CURVE = 2000


def _thin(x, y):
    step = max(1, len(x) // MAX_POINTS_PER_CURVE)
    return x[::step], y[::step]


def line_chart(path, series, xlabel: str, ylabel: str, title: str,
               logx: bool = False, logy: bool = False, guides=()) -> Path:
    """Write one SVG line chart.

    ``series`` is a list of (label, x, y); ``guides`` a list of
    (slope, label) pairs drawn as dashed log-log reference lines anchored
    near the first point of the first series.
    """
    # SVG output: 72 units per inch, so this yields an 800x600 viewBox
    fig, ax = plt.subplots(figsize=(800.0 / 72.0, 600.0 / 72.0))
    for label, x, y in series:
        xs, ys = _thin(x, y)
        ax.plot(xs, ys, label=label, linewidth=1.2)
    if guides and series:
        _, gx, gy = series[0]
        for slope, label in guides:
            anchor_y = 0.5 * gy[0]
            ax.plot(gx, [anchor_y * (x / gx[0]) ** slope for x in gx],
                    linestyle="--", linewidth=0.9, color="gray", label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
