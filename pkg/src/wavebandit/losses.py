"""The five base loss measures of a completed experiment, plus the ten
pairwise hybrids.

Regret losses compare against the truly best arm; precision losses are
posterior RMSEs; the power loss is a binary failure indicator for
recovering the true arm ordering from pairwise posterior tests. Hybrids
average regret/precision pairs and take the max when the power loss is
involved (a constraint-style objective: any ordering failure costs 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np

from wavebandit.errors import ContractViolation
from wavebandit.posterior import PosteriorState, rmse

BASE_MEASURES = ("r_sample", "r_policy", "prec_best", "prec_avg", "sp")

DEFAULT_TEST_ALPHA = 0.05


@dataclass(frozen=True)
class TruthSet:
    """True per-arm success probabilities for one trial."""

    theta_star: tuple[float, ...]

    def __post_init__(self):
        if any(not 0.0 <= t <= 1.0 for t in self.theta_star):
            raise ContractViolation(f"theta_star components must lie in [0, 1], got {self.theta_star}")

    def __len__(self) -> int:
        return len(self.theta_star)

    @property
    def as_array(self) -> np.ndarray:
        return np.array(self.theta_star)

    @property
    def best_arm(self) -> int:
        """Index of the truly best arm, lowest index on exact ties."""
        return int(np.argmax(self.as_array))


@dataclass(frozen=True)
class LossVector:
    """The five base losses of one experiment, each in [0, 1]."""

    r_sample: float
    r_policy: float
    prec_best: float
    prec_avg: float
    sp: int

    def as_dict(self) -> dict[str, float]:
        return {
            "r_sample": self.r_sample,
            "r_policy": self.r_policy,
            "prec_best": self.prec_best,
            "prec_avg": self.prec_avg,
            "sp": float(self.sp),
        }


def hybrid_pairs() -> list[tuple[str, str]]:
    """The ten unordered pairs of distinct base measures, canonical order."""
    return list(combinations(BASE_MEASURES, 2))


def regret_gap(truth: TruthSet, k: int) -> float:
    """Welfare lost by assigning to arm k instead of the truly best arm."""
    theta = truth.as_array
    if not 0 <= k < len(theta):
        raise ContractViolation(f"arm index {k} out of range for {len(theta)} arms")
    return float(theta.max() - theta[k])


def in_sample_regret(truth: TruthSet, per_wave_counts: np.ndarray) -> float:
    """Average regret gap incurred per participant over all waves."""
    counts = np.asarray(per_wave_counts)
    if counts.ndim == 1:
        counts = counts[None, :]
    if counts.shape[-1] != len(truth):
        raise ContractViolation("per-wave counts and truth have different arm counts")
    theta = truth.as_array
    gaps = theta.max() - theta
    n = counts.sum()
    return float((counts.sum(axis=0) * gaps).sum() / n)


def estimated_best_arm(final: PosteriorState) -> tuple[int, bool]:
    """Arm with the highest posterior mean, plus whether that was an exact
    tie (broken to the lowest index)."""
    means = final.means
    khat = int(np.argmax(means))
    tie = bool(np.count_nonzero(means == means[khat]) > 1)
    return khat, tie


def policy_regret(truth: TruthSet, final: PosteriorState) -> float:
    """Regret gap of the arm the experiment would recommend as policy."""
    khat, _ = estimated_best_arm(final)
    return regret_gap(truth, khat)


def precision_losses(truth: TruthSet, final: PosteriorState) -> tuple[float, float]:
    """(RMSE of the recommended arm, average RMSE over all arms)."""
    if len(truth) != len(final):
        raise ContractViolation("truth and posterior state have different arm counts")
    khat, _ = estimated_best_arm(final)
    per_arm = [rmse(arm, t) for arm, t in zip(final.arms, truth.theta_star)]
    return per_arm[khat], float(np.mean(per_arm))


def true_ranking(truth: TruthSet) -> tuple[np.ndarray, bool]:
    """Arm indices sorted ascending by true value, plus a flag for exact
    ties (which make the true order ambiguous; broken by index)."""
    theta = truth.as_array
    order = np.argsort(theta, kind="stable")
    tie = bool(np.any(theta[order][1:] == theta[order][:-1]))
    return order, tie


def statistical_power_loss(
    truth: TruthSet,
    final: PosteriorState,
    alpha: float,
    m: int,
    rng: np.random.Generator,
) -> int:
    """1 if the experiment failed to confirm the true arm ordering, else 0.

    For each adjacent pair in the true ascending order, the empirical
    p-value is the fraction of m joint posterior draws on which the
    higher-ranked arm does not beat the lower-ranked one; every pair must
    come in under ``alpha``. One shared draw matrix serves all pairs.
    """
    if not 0.0 < alpha < 1.0:
        raise ContractViolation(f"alpha must lie in (0, 1), got {alpha}")
    if m < 1:
        raise ContractViolation("m must be at least 1")
    if len(truth) != len(final):
        raise ContractViolation("truth and posterior state have different arm counts")
    order, _ = true_ranking(truth)
    alphas = final.alphas
    betas = final.betas
    draws = np.empty((m, len(final)))
    for k in range(len(final)):
        draws[:, k] = rng.beta(alphas[k], betas[k], m)
    for lo, hi in zip(order[:-1], order[1:]):
        p_hat = float(np.count_nonzero(draws[:, hi] <= draws[:, lo])) / m
        if p_hat >= alpha:
            return 1
    return 0


def hybrid_loss(measure_a: str, measure_b: str, losses: LossVector | Mapping[str, float]) -> float:
    """Combine two base losses: mean for regret/precision pairs, max when
    the power loss is one member. The diagonal is the base loss itself."""
    for name in (measure_a, measure_b):
        if name not in BASE_MEASURES:
            raise ContractViolation(f"unknown measure {name!r}; expected one of {BASE_MEASURES}")
    values = losses.as_dict() if isinstance(losses, LossVector) else losses
    a = float(values[measure_a])
    b = float(values[measure_b])
    if measure_a == measure_b:
        return a
    if "sp" in (measure_a, measure_b):
        return max(a, b)
    return (a + b) / 2.0
