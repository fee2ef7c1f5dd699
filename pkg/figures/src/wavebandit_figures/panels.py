"""Mean/CI panels: one panel per loss measure, mean loss versus the
number of experimental waves, one series per mechanism with 95% CI bars."""

from __future__ import annotations

from pathlib import Path

from matplotlib.figure import Figure

from wavebandit_figures.schema import (
    AGGREGATE_COLUMNS,
    MEASURE_LABELS,
    MEASURES,
    MECHANISM_COLORS,
    MECHANISM_LABELS,
    MECHANISMS,
    PANEL_LETTERS,
    read_rows,
)


def render_panels(csv_path: str | Path, out_path: str | Path, n_total: int = 1000) -> Figure:
    """Render the five-panel figure from an aggregate CSV and save it.

    The x axis is the number of waves T = n_total / wave_size, so the
    default matches the study's fixed population of 1,000.
    """
    rows = read_rows(csv_path, AGGREGATE_COLUMNS)
    by_measure: dict[str, dict[str, list[tuple[int, float, float]]]] = {}
    for row in rows:
        waves = n_total // int(row["wave_size"])
        by_measure.setdefault(row["measure"], {}).setdefault(row["mechanism"], []).append(
            (waves, float(row["mean"]), float(row["ci_half_width"]))
        )

    measures = [m for m in MEASURES if m in by_measure]
    fig = Figure(figsize=(4 * len(measures), 3.6))
    axes = fig.subplots(1, len(measures), squeeze=False)[0]
    for letter, measure, ax in zip(PANEL_LETTERS, measures, axes):
        for mech in MECHANISMS:
            points = sorted(by_measure[measure].get(mech, []))
            if not points:
                continue
            x = [p[0] for p in points]
            y = [p[1] for p in points]
            err = [p[2] for p in points]
            ax.errorbar(
                x, y, yerr=err,
                label=MECHANISM_LABELS[mech], color=MECHANISM_COLORS[mech],
                marker="o", markersize=4, capsize=3, linewidth=1.4,
            )
        ax.set_xscale("log")
        ax.set_title(f"{letter}: {MEASURE_LABELS.get(measure, measure)}")
        ax.set_xlabel("Number of waves")
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel("Mean loss")
    axes[-1].legend(loc="best", fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    return fig
