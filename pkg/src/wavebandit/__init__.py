"""wavebandit: wave-based adaptive experiment simulation for Bernoulli arms.

Four assignment mechanisms (random, Thompson, Exploration, Tempered
Thompson), five base loss measures plus their pairwise hybrids, and a
reproducible Monte Carlo harness with mean/CI and win-matrix analysis.
"""

__version__ = "0.1.0"

from wavebandit.config import ExperimentConfig
from wavebandit.losses import LossVector, TruthSet, hybrid_loss
from wavebandit.mechanisms import MechanismKind, allocate, assignment_probs
from wavebandit.posterior import (
    BetaParams,
    OutcomeCounts,
    PosteriorState,
    posterior_mean,
    prob_best_mc,
    prob_best_quadrature,
    reg_inc_beta,
    rmse,
    sample_posterior,
    update,
)
from wavebandit.harness import draw_truth, run_experiment, run_study, run_study_to_file
from wavebandit.store import TrialRecord, iter_records, lint_store, read_records

__all__ = [
    "BetaParams",
    "ExperimentConfig",
    "LossVector",
    "MechanismKind",
    "OutcomeCounts",
    "PosteriorState",
    "TrialRecord",
    "TruthSet",
    "allocate",
    "assignment_probs",
    "draw_truth",
    "hybrid_loss",
    "iter_records",
    "lint_store",
    "posterior_mean",
    "prob_best_mc",
    "prob_best_quadrature",
    "read_records",
    "reg_inc_beta",
    "rmse",
    "run_experiment",
    "run_study",
    "run_study_to_file",
    "sample_posterior",
    "update",
]
