"""Figure rendering for the report path.

The CLI writes these PNGs next to the metrics TSV: a per-step review
summary (kept / added / edited / removed) and the distribution of the
most frequent window titles that fed the selection heuristics.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .awt import TitleStat
from .labels import StepMetrics
from .session import STEP_NAMES


def render_step_metrics_figure(rows: Sequence[StepMetrics], path: str | Path) -> Path:
    """Grouped bar chart of review outcomes per confirmed step."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    categories = ("kept_as_is", "added", "edited", "removed")
    colors = ("#4c9f70", "#4878a8", "#d39c3f", "#b0413e")
    width = 0.2
    positions = range(len(rows))
    for offset, (category, color) in enumerate(zip(categories, colors)):
        values = [getattr(row, category) for row in rows]
        ax.bar(
            [p + (offset - 1.5) * width for p in positions],
            values,
            width=width,
            label=category.replace("_", " "),
            color=color,
        )
    ax.set_xticks(list(positions))
    ax.set_xticklabels(
        [f"{row.step}. {STEP_NAMES[row.step]}\n({row.generated} generated)" for row in rows]
    )
    ax.set_ylabel("items")
    ax.set_title("Review outcomes per step")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_title_frequency_figure(
    stats: Sequence[TitleStat], path: str | Path, top_n: int = 20
) -> Path:
    """Horizontal bars for the most frequent window titles."""
    path = Path(path)
    top = list(stats[:top_n])
    fig, ax = plt.subplots(figsize=(8, max(3.0, 0.3 * len(top) + 1.5)))
    labels = [s.title if len(s.title) <= 48 else s.title[:45] + "..." for s in top]
    counts = [s.occurrence_count for s in top]
    ax.barh(range(len(top)), counts, color="#4878a8")
    ax.set_yticks(range(len(top)))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("occurrences")
    ax.set_title(f"Top {len(top)} window titles")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
