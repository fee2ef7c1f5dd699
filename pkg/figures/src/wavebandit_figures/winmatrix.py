"""Win-matrix heatmaps: one lower-triangular 5x5 matrix per wave size,
each cell colored by the winning mechanism and annotated with its value
from the CSV (win share in per-trial mode, mean loss in avg mode)."""

from __future__ import annotations

from pathlib import Path

from matplotlib.figure import Figure
from matplotlib.patches import Patch, Rectangle

from wavebandit_figures.schema import (
    MEASURE_LABELS,
    MEASURES,
    MECHANISM_COLORS,
    MECHANISM_LABELS,
    WINMATRIX_COLUMNS,
    FigureSchemaError,
    read_rows,
)


def render_winmatrix(csv_path: str | Path, out_path: str | Path) -> Figure:
    """Render one annotated matrix per wave size from a win-matrix CSV."""
    rows = read_rows(csv_path, WINMATRIX_COLUMNS)
    modes = {row["mode"] for row in rows}
    if len(modes) > 1:
        raise FigureSchemaError(f"{csv_path}: mixed modes {sorted(modes)} in one file")
    mode = modes.pop()

    by_wave: dict[int, dict[tuple[str, str], dict]] = {}
    index = {measure: i for i, measure in enumerate(MEASURES)}
    for row in rows:
        a, b = row["measure_a"], row["measure_b"]
        if a not in index or b not in index:
            raise FigureSchemaError(f"{csv_path}: unknown measure pair ({a}, {b})")
        by_wave.setdefault(int(row["wave_size"]), {})[(a, b)] = row

    wave_sizes = sorted(by_wave)
    k = len(MEASURES)
    fig = Figure(figsize=(4.6 * len(wave_sizes), 4.6))
    axes = fig.subplots(1, len(wave_sizes), squeeze=False)[0]
    for ax, wave_size in zip(axes, wave_sizes):
        cells = by_wave[wave_size]
        for (a, b), row in cells.items():
            # combinations order puts the earlier measure first, so the
            # lower-triangle cell sits at (row=later, col=earlier)
            col, line = sorted((index[a], index[b]))
            winner = row["winner"]
            value = float(row[f"prop_{winner}"])  # win share, or mean loss in avg mode
            ax.add_patch(
                Rectangle((col, line), 1, 1, facecolor=MECHANISM_COLORS[winner],
                          edgecolor="white", alpha=0.85)
            )
            ax.text(col + 0.5, line + 0.5, f"{value:.2f}", ha="center", va="center",
                    fontsize=9, color="black")
        ax.set_xlim(0, k)
        ax.set_ylim(k, 0)
        ax.set_xticks([i + 0.5 for i in range(k)])
        ax.set_xticklabels([MEASURE_LABELS[m] for m in MEASURES], rotation=30, ha="right",
                           fontsize=7)
        ax.set_yticks([i + 0.5 for i in range(k)])
        ax.set_yticklabels([MEASURE_LABELS[m] for m in MEASURES], fontsize=7)
        ax.set_aspect("equal")
        ax.set_title(f"Wave size {wave_size}")
    annotation = "winner's mean loss" if mode == "avg" else "winner's share of trials"
    fig.suptitle(f"Loss-minimizing mechanism per hybrid measure (cells show {annotation})")
    handles = [
        Patch(facecolor=MECHANISM_COLORS[m], label=MECHANISM_LABELS[m]) for m in MECHANISM_COLORS
    ]
    axes[-1].legend(handles=handles, loc="upper right", fontsize=8, framealpha=0.9)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    return fig
