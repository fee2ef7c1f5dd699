"""The CSV contracts this package consumes, and shared plotting constants.

The columns mirror the wavebandit analysis output exactly; nothing here
recomputes losses or win shares.
"""

from __future__ import annotations

import csv
from pathlib import Path


class FigureSchemaError(ValueError):
    """Input CSV does not match the expected schema; message names the problem."""


AGGREGATE_COLUMNS = ("measure", "mechanism", "wave_size", "mean", "ci_half_width", "n")
WINMATRIX_COLUMNS = (
    "measure_a",
    "measure_b",
    "wave_size",
    "winner",
    "prop_ra",
    "prop_thompson",
    "prop_exploration",
    "prop_tempered",
    "mode",
)

MEASURES = ("r_sample", "r_policy", "prec_best", "prec_avg", "sp")
MEASURE_LABELS = {
    "r_sample": "In-sample regret",
    "r_policy": "Policy regret",
    "prec_best": "RMSE of best arm",
    "prec_avg": "Average RMSE",
    "sp": "Ordering failure",
}
PANEL_LETTERS = ("A", "B", "C", "D", "E")

MECHANISMS = ("ra", "thompson", "exploration", "tempered")
MECHANISM_LABELS = {
    "ra": "RA",
    "thompson": "Thompson",
    "exploration": "Exploration",
    "tempered": "Tempered",
}
# Fixed mechanism colors (colorblind-safe) so figures compare across runs.
MECHANISM_COLORS = {
    "ra": "#4477AA",
    "thompson": "#EE6677",
    "exploration": "#228833",
    "tempered": "#CCBB44",
}


def read_rows(path: str | Path, expected_columns: tuple[str, ...]) -> list[dict]:
    """Load a CSV, checking the header and that there is at least one row."""
    path = Path(path)
    if not path.is_file():
        raise FigureSchemaError(f"input file not found: {path}")
    with path.open() as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in expected_columns if col not in header]
        if missing:
            raise FigureSchemaError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise FigureSchemaError(f"{path}: no data rows")
    return rows
