"""Aggregation of trial records: mean/CI tables per loss measure and the
hybrid-measure win matrices (per-trial win counting and the average-loss
variant)."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from wavebandit.errors import ContractViolation
from wavebandit.losses import BASE_MEASURES, hybrid_loss, hybrid_pairs
from wavebandit.mechanisms import MECHANISM_ORDER
from wavebandit.store import TrialRecord

log = logging.getLogger(__name__)

# Normal-approximation 95% interval; full-study groups have n >= 1000.
CI_Z = 1.96

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


@dataclass(frozen=True)
class MeanCI:
    measure: str
    mechanism: str
    wave_size: int
    mean: float
    ci_half_width: float
    n: int


@dataclass(frozen=True)
class WinCell:
    """One (measure_a, measure_b) cell of a win matrix."""

    measure_a: str
    measure_b: str
    winner: str
    props: dict[str, float]
    tie: bool = False


@dataclass(frozen=True)
class WinMatrix:
    wave_size: int
    mode: str  # "per-trial" or "avg"
    cells: tuple[WinCell, ...]
    n_trials: int
    excluded_trials: int


def matrix_cells() -> list[tuple[str, str]]:
    """The 15 cells: 5 diagonal base measures plus the 10 hybrid pairs."""
    return [(m, m) for m in BASE_MEASURES] + hybrid_pairs()


def aggregate_means(records: Iterable[TrialRecord], measure: str) -> list[MeanCI]:
    """Group by (mechanism, wave_size) and compute mean with a 95% CI
    half-width (1.96 * s / sqrt(n), sample standard deviation).

    Groups with fewer than two records are omitted with a warning. Rows
    come out ordered by mechanism (canonical order) then wave size.
    """
    if measure not in BASE_MEASURES:
        raise ContractViolation(f"unknown measure {measure!r}; expected one of {BASE_MEASURES}")
    groups: dict[tuple[str, int], list[float]] = {}
    for rec in records:
        groups.setdefault((rec.mechanism, rec.wave_size), []).append(
            rec.losses.as_dict()[measure]
        )
    rows = []
    for (mechanism, wave_size) in sorted(
        groups, key=lambda g: (_mech_rank(g[0]), g[1])
    ):
        values = groups[(mechanism, wave_size)]
        n = len(values)
        if n < 2:
            log.warning(
                "omitting group (%s, wave_size=%d) with %d record(s)", mechanism, wave_size, n
            )
            continue
        values.sort()  # canonical summation order: results never depend on record order
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / (n - 1)
        rows.append(
            MeanCI(measure, mechanism, wave_size, mean, CI_Z * math.sqrt(var / n), n)
        )
    return rows


def _mech_rank(tag: str) -> int:
    return MECHANISM_ORDER.index(tag) if tag in MECHANISM_ORDER else len(MECHANISM_ORDER)


def _loss_table(
    records: Iterable[TrialRecord], wave_size: int
) -> tuple[dict[int, dict[str, TrialRecord]], int]:
    """Per-trial mechanism->record maps at one wave size, keeping only
    trials with every mechanism present; returns (table, excluded)."""
    by_trial: dict[int, dict[str, TrialRecord]] = {}
    for rec in records:
        if rec.wave_size == wave_size:
            by_trial.setdefault(rec.trial, {})[rec.mechanism] = rec
    complete = {
        trial: recs
        for trial, recs in by_trial.items()
        if set(recs) == set(MECHANISM_ORDER)
    }
    excluded = len(by_trial) - len(complete)
    if excluded:
        log.warning(
            "wave_size=%d: excluded %d trial(s) missing mechanism cells", wave_size, excluded
        )
    return complete, excluded


def win_matrix_per_trial(records: Sequence[TrialRecord], wave_size: int) -> WinMatrix:
    """Per cell, the share of trials on which each mechanism achieved the
    lowest hybrid loss; exact ties split fractionally. The winner is the
    mechanism with the largest share (lowest id on ties)."""
    table, excluded = _loss_table(records, wave_size)
    if not table:
        raise ContractViolation(f"no complete trials at wave_size={wave_size}")
    n = len(table)
    trials = sorted(table)  # canonical accumulation order
    cells = []
    for a, b in matrix_cells():
        wins = {mech: 0.0 for mech in MECHANISM_ORDER}
        for trial in trials:
            recs = table[trial]
            losses = {mech: hybrid_loss(a, b, recs[mech].losses) for mech in MECHANISM_ORDER}
            lowest = min(losses.values())
            tied = [mech for mech, v in losses.items() if v == lowest]
            for mech in tied:
                wins[mech] += 1.0 / len(tied)
        props = {mech: wins[mech] / n for mech in MECHANISM_ORDER}
        top = max(props.values())
        winners = [mech for mech in MECHANISM_ORDER if props[mech] == top]
        cells.append(WinCell(a, b, winners[0], props, tie=len(winners) > 1))
    return WinMatrix(wave_size, "per-trial", tuple(cells), n, excluded)


def win_matrix_avg(records: Sequence[TrialRecord], wave_size: int) -> WinMatrix:
    """Footnote variant: the winner is the mechanism with the lowest mean
    hybrid loss across trials; the per-mechanism fields carry those mean
    losses rather than win shares (flagged by mode="avg")."""
    table, excluded = _loss_table(records, wave_size)
    if not table:
        raise ContractViolation(f"no complete trials at wave_size={wave_size}")
    n = len(table)
    trials = sorted(table)
    cells = []
    for a, b in matrix_cells():
        means = {
            mech: sum(hybrid_loss(a, b, table[t][mech].losses) for t in trials) / n
            for mech in MECHANISM_ORDER
        }
        lowest = min(means.values())
        winners = [mech for mech in MECHANISM_ORDER if means[mech] == lowest]
        cells.append(WinCell(a, b, winners[0], means, tie=len(winners) > 1))
    return WinMatrix(wave_size, "avg", tuple(cells), n, excluded)


def write_aggregate_csv(rows: Iterable[MeanCI], path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATE_COLUMNS)
        for row in rows:
            writer.writerow(
                [row.measure, row.mechanism, row.wave_size, repr(row.mean),
                 repr(row.ci_half_width), row.n]
            )


def write_winmatrix_csv(matrices: Iterable[WinMatrix], path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(WINMATRIX_COLUMNS)
        for matrix in matrices:
            for cell in matrix.cells:
                writer.writerow(
                    [cell.measure_a, cell.measure_b, matrix.wave_size, cell.winner]
                    + [repr(cell.props[mech]) for mech in MECHANISM_ORDER]
                    + [matrix.mode]
                )
