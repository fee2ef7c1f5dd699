"""The run store: line-delimited JSON, one experiment record per line.

Field order is fixed so reruns with the same master seed produce
byte-identical files regardless of worker count. ``lint_store`` checks
the conservation and range invariants every record must satisfy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from wavebandit.errors import StoreFormatError
from wavebandit.losses import LossVector

RECORD_FIELDS = (
    "trial",
    "mechanism",
    "wave_size",
    "theta_star",
    "r_sample",
    "r_policy",
    "prec_best",
    "prec_avg",
    "sp",
    "counts",
    "alpha_final",
    "beta_final",
    "seed",
    "tie_flags",
)


@dataclass(frozen=True)
class TrialRecord:
    """One complete experiment: coordinates, truth, losses, final state."""

    trial: int
    mechanism: str
    wave_size: int
    theta_star: tuple[float, ...]
    losses: LossVector
    counts: tuple[int, ...]
    alpha_final: tuple[float, ...]
    beta_final: tuple[float, ...]
    seed: int
    tie_flags: dict[str, bool]


def record_to_line(rec: TrialRecord) -> str:
    payload = {
        "trial": rec.trial,
        "mechanism": rec.mechanism,
        "wave_size": rec.wave_size,
        "theta_star": list(rec.theta_star),
        "r_sample": rec.losses.r_sample,
        "r_policy": rec.losses.r_policy,
        "prec_best": rec.losses.prec_best,
        "prec_avg": rec.losses.prec_avg,
        "sp": rec.losses.sp,
        "counts": list(rec.counts),
        "alpha_final": list(rec.alpha_final),
        "beta_final": list(rec.beta_final),
        "seed": rec.seed,
        "tie_flags": rec.tie_flags,
    }
    return json.dumps(payload, separators=(",", ":"))


def record_from_dict(data: dict) -> TrialRecord:
    losses = LossVector(
        r_sample=float(data["r_sample"]),
        r_policy=float(data["r_policy"]),
        prec_best=float(data["prec_best"]),
        prec_avg=float(data["prec_avg"]),
        sp=int(data["sp"]),
    )
    return TrialRecord(
        trial=int(data["trial"]),
        mechanism=str(data["mechanism"]),
        wave_size=int(data["wave_size"]),
        theta_star=tuple(float(t) for t in data["theta_star"]),
        losses=losses,
        counts=tuple(int(c) for c in data["counts"]),
        alpha_final=tuple(float(a) for a in data["alpha_final"]),
        beta_final=tuple(float(b) for b in data["beta_final"]),
        seed=int(data["seed"]),
        tie_flags=dict(data["tie_flags"]),
    )


def iter_records(path: str | Path) -> Iterator[TrialRecord]:
    """Parse a run store, raising StoreFormatError with the line number on
    the first malformed line."""
    path = Path(path)
    with path.open("r") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                missing = [f for f in RECORD_FIELDS if f not in data]
                if missing:
                    raise KeyError(f"missing fields {missing}")
                yield record_from_dict(data)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise StoreFormatError(f"{path}: malformed record on line {lineno}: {exc}") from exc


def read_records(path: str | Path) -> list[TrialRecord]:
    return list(iter_records(path))


def lint_store(
    path: str | Path,
    n_total: int | None = None,
    prior: tuple[float, float] | None = None,
) -> int:
    """Check every record's invariants; returns the number of records.

    Always checked: loss components in [0, 1], sp binary, theta_star in
    [0, 1], counts non-negative, and posterior mass conservation (total
    posterior pseudo-counts minus participants is the same prior mass in
    every record). With ``n_total``/``prior`` given, sums are also checked
    against those exact values. Raises StoreFormatError on any violation.
    """
    path = Path(path)
    n_records = 0
    seen_prior_mass: float | None = None
    for rec in iter_records(path):
        n_records += 1
        where = f"{path}: record (trial={rec.trial}, mechanism={rec.mechanism}, wave_size={rec.wave_size})"
        for name, value in rec.losses.as_dict().items():
            if not 0.0 <= value <= 1.0:
                raise StoreFormatError(f"{where}: loss {name}={value} outside [0, 1]")
        if rec.losses.sp not in (0, 1):
            raise StoreFormatError(f"{where}: sp={rec.losses.sp} is not binary")
        if any(not 0.0 <= t <= 1.0 for t in rec.theta_star):
            raise StoreFormatError(f"{where}: theta_star outside [0, 1]")
        if any(c < 0 for c in rec.counts):
            raise StoreFormatError(f"{where}: negative count")
        total = sum(rec.counts)
        if n_total is not None and total != n_total:
            raise StoreFormatError(f"{where}: counts sum to {total}, expected {n_total}")
        mass = sum(rec.alpha_final) + sum(rec.beta_final) - total
        if seen_prior_mass is None:
            seen_prior_mass = mass
        elif mass != seen_prior_mass:
            raise StoreFormatError(
                f"{where}: posterior mass {mass} breaks conservation (expected {seen_prior_mass})"
            )
        if prior is not None:
            expected_mass = len(rec.theta_star) * (prior[0] + prior[1])
            if mass != expected_mass:
                raise StoreFormatError(
                    f"{where}: posterior mass {mass} does not match prior mass {expected_mass}"
                )
    return n_records
