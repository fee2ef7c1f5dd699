"""Study execution: single experiments, full replication grids, and the
parallel driver that streams records to a run store.

Determinism comes from keying every random stream to coordinates: the
truth vector of trial i depends on (master_seed, i) only, so it is
shared by all mechanism/wave-size cells of that trial, and each cell
gets its own seed from (master_seed, trial, mechanism, wave_size).
Worker count and scheduling never enter the stream, so a rerun at any
parallelism writes byte-identical stores.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterator

import numpy as np

from wavebandit import __version__
from wavebandit.backend import get_kernels, resolve_backend
from wavebandit.config import ExperimentConfig
from wavebandit.errors import ConfigError
from wavebandit.losses import (
    LossVector,
    TruthSet,
    estimated_best_arm,
    in_sample_regret,
    regret_gap,
    precision_losses,
    statistical_power_loss,
    true_ranking,
)
from wavebandit.mechanisms import ALLOCATION_POLICIES, MechanismKind
from wavebandit.posterior import PosteriorState
from wavebandit.seeding import derive_seed, make_rng, truth_seed
from wavebandit.store import TrialRecord, record_to_line


def draw_truth(config: ExperimentConfig, trial: int) -> TruthSet:
    """Trial truth: each arm's true mean drawn iid uniform on [0, 1]."""
    rng = make_rng(truth_seed(config.master_seed, trial))
    return TruthSet(tuple(rng.random(config.k_arms)))


def run_experiment(
    config: ExperimentConfig,
    mechanism: MechanismKind,
    wave_size: int,
    truth: TruthSet,
    seed: int,
    trial: int = 0,
) -> TrialRecord:
    """One complete experiment: T waves of assignment, outcomes, updates,
    then the full loss vector. Deterministic given (config, truth, seed)."""
    if config.n_total % wave_size != 0:
        raise ConfigError(f"wave_sizes: n_total={config.n_total} is not divisible by {wave_size}")
    if len(truth) != config.k_arms:
        raise ConfigError(f"k_arms: truth has {len(truth)} components, config wants {config.k_arms}")
    kernels = get_kernels()
    rng = make_rng(seed)
    k = config.k_arms
    alpha = np.full(k, float(config.prior[0]))
    beta = np.full(k, float(config.prior[1]))
    theta = truth.as_array
    n_waves = config.waves_for(wave_size)
    gamma = mechanism.gamma if mechanism.gamma is not None else 0.0
    policy_id = ALLOCATION_POLICIES.index(config.allocation_policy)

    wave_counts = kernels.simulate_waves(
        rng, alpha, beta, theta, n_waves, wave_size, mechanism.mech_id, gamma,
        config.mc_draws, policy_id,
    )

    final = PosteriorState.from_arrays(alpha, beta)
    khat, khat_tie = estimated_best_arm(final)
    _, truth_tie = true_ranking(truth)
    prec_best, prec_avg = precision_losses(truth, final)
    losses = LossVector(
        r_sample=in_sample_regret(truth, wave_counts),
        r_policy=regret_gap(truth, khat),
        prec_best=prec_best,
        prec_avg=prec_avg,
        sp=statistical_power_loss(truth, final, config.alpha, config.sp_draws, rng),
    )
    return TrialRecord(
        trial=trial,
        mechanism=mechanism.tag,
        wave_size=wave_size,
        theta_star=truth.theta_star,
        losses=losses,
        counts=tuple(int(c) for c in wave_counts.sum(axis=0)),
        alpha_final=tuple(float(a) for a in alpha),
        beta_final=tuple(float(b) for b in beta),
        seed=seed,
        tie_flags={"truth_tie": truth_tie, "khat_tie": khat_tie},
    )


def run_trial(config: ExperimentConfig, trial: int) -> list[TrialRecord]:
    """All mechanism x wave-size cells of one trial, on one shared truth."""
    truth = draw_truth(config, trial)
    records = []
    for mechanism in config.mechanism_kinds():
        for wave_size in config.wave_sizes:
            seed = derive_seed(config.master_seed, trial, mechanism.mech_id, wave_size)
            records.append(run_experiment(config, mechanism, wave_size, truth, seed, trial))
    return records


def run_study(config: ExperimentConfig) -> Iterator[TrialRecord]:
    """Sequential record stream in (trial, mechanism, wave_size) order."""
    for trial in range(config.replications):
        yield from run_trial(config, trial)


def _trial_block(args: tuple[ExperimentConfig, int, int]) -> str:
    config, lo, hi = args
    lines = []
    for trial in range(lo, hi):
        lines.extend(record_to_line(rec) for rec in run_trial(config, trial))
    return "\n".join(lines) + "\n"


def _block_ranges(replications: int, workers: int) -> list[tuple[int, int]]:
    block = max(1, min(64, replications // (workers * 4) or 1))
    return [(lo, min(lo + block, replications)) for lo in range(0, replications, block)]


def run_study_to_file(
    config: ExperimentConfig,
    out_path: str | Path,
    workers: int | None = None,
    progress: bool = False,
) -> dict:
    """Run the full grid, streaming records to ``out_path`` in canonical
    order, and write a manifest next to it. Returns the manifest dict.

    Trials are split into blocks executed by a process pool; blocks are
    written strictly in submission order, so the store bytes do not
    depend on the worker count.
    """
    out_path = Path(out_path)
    workers = workers if workers and workers > 0 else (os.cpu_count() or 1)
    started = time.perf_counter()
    blocks = _block_ranges(config.replications, workers)
    n_written = 0
    pool = None
    try:
        with out_path.open("w") as sink:
            if workers == 1:
                chunks = map(_trial_block, ((config, lo, hi) for lo, hi in blocks))
            else:
                pool = ProcessPoolExecutor(max_workers=workers)
                chunks = pool.map(_trial_block, [(config, lo, hi) for lo, hi in blocks])
            for i, chunk in enumerate(chunks):
                sink.write(chunk)
                n_written += chunk.count("\n")
                if progress:
                    done = blocks[i][1]
                    print(f"\r{done}/{config.replications} trials", end="", file=sys.stderr)
            if progress:
                print(file=sys.stderr)
    except OSError as exc:
        manifest = _manifest(config, out_path, n_written, started, partial=True, error=str(exc))
        _write_manifest(out_path, manifest)
        raise
    finally:
        if pool is not None:
            pool.shutdown()
    manifest = _manifest(config, out_path, n_written, started, partial=False)
    _write_manifest(out_path, manifest)
    return manifest


def _manifest(
    config: ExperimentConfig,
    out_path: Path,
    n_records: int,
    started: float,
    partial: bool,
    error: str | None = None,
) -> dict:
    manifest = {
        "store": out_path.name,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "master_seed": config.master_seed,
        "records": n_records,
        "expected_records": config.replications * config.cells_per_trial,
        "wall_time_s": round(time.perf_counter() - started, 3),
        "backend": resolve_backend(),
        "version": __version__,
        "partial": partial,
    }
    if error is not None:
        manifest["error"] = error
    return manifest


def manifest_path(out_path: str | Path) -> Path:
    return Path(str(out_path) + ".manifest.json")


def _write_manifest(out_path: Path, manifest: dict) -> None:
    manifest_path(out_path).write_text(json.dumps(manifest, indent=2) + "\n")
