"""Pure-numpy implementations of the hot simulation kernels.

This is the fallback backend; :mod:`wavebandit.kernels_numba` holds the
@njit twins. Both backends must consume random draws in exactly the same
sequence so a given seed yields byte-identical experiment records on
either path. The contract, per wave:

  1. adaptive mechanisms only (``mech_id != MECH_RA``): K calls
     ``rng.beta(alpha[k], beta[k], m)`` with k ascending;
  2. iid allocation only: one call ``rng.random(n)``;
  3. outcomes: for each arm with a positive count, in ascending arm
     order, one call ``rng.random(count)``.

Nothing else touches the generator. Sums feeding record values are
accumulated strictly left to right (``np.add.accumulate`` here, scalar
loops in the numba twin) because numpy's blocked ``np.sum`` can round
differently from a sequential loop.
"""

from __future__ import annotations

import numpy as np

MECH_RA = 0
MECH_THOMPSON = 1
MECH_EXPLORATION = 2
MECH_TEMPERED = 3

POLICY_IID = 0
POLICY_LARGEST_REMAINDER = 1

# Below this, the exploration reweighting denominator counts as degenerate
# and the Thompson vector is passed through unchanged.
EXPLORATION_EPS = 1e-12


def prob_best(rng: np.random.Generator, alpha: np.ndarray, beta: np.ndarray, m: int) -> np.ndarray:
    """Monte Carlo estimate of the posterior probability each arm is best.

    Draws per-arm blocks of ``m`` Beta variates and counts strict argmax
    wins; exact ties go to the lowest index (first max).
    """
    k = alpha.shape[0]
    draws = np.empty((k, m))
    for j in range(k):
        draws[j] = rng.beta(alpha[j], beta[j], m)
    wins = np.bincount(np.argmax(draws, axis=0), minlength=k)
    return wins / m


def exploration_reweight(p: np.ndarray) -> np.ndarray:
    """p_k(1-p_k) / sum_j p_j(1-p_j), falling back to ``p`` when the
    denominator is degenerate (posterior certain about the best arm)."""
    w = p * (1.0 - p)
    s = float(np.add.accumulate(w)[-1])
    if s < EXPLORATION_EPS:
        return p.copy()
    return w / s


def temper(p: np.ndarray, gamma: float) -> np.ndarray:
    """(1-gamma) * p + gamma / K blend toward uniform."""
    return (1.0 - gamma) * p + gamma / p.shape[0]


def wave_probs(
    rng: np.random.Generator,
    alpha: np.ndarray,
    beta: np.ndarray,
    mech_id: int,
    gamma: float,
    m: int,
) -> np.ndarray:
    """Assignment probabilities for one wave under the given mechanism."""
    k = alpha.shape[0]
    if mech_id == MECH_RA:
        return np.full(k, 1.0 / k)
    p = prob_best(rng, alpha, beta, m)
    if mech_id == MECH_THOMPSON:
        return p
    if mech_id == MECH_EXPLORATION:
        return exploration_reweight(p)
    return temper(p, gamma)


def allocate(rng: np.random.Generator, probs: np.ndarray, n: int, policy_id: int) -> np.ndarray:
    """Convert assignment probabilities into integer counts summing to ``n``."""
    k = probs.shape[0]
    if policy_id == POLICY_IID:
        cum = np.add.accumulate(probs)
        idx = np.searchsorted(cum, rng.random(n), side="right")
        np.minimum(idx, k - 1, out=idx)
        return np.bincount(idx, minlength=k).astype(np.int64)
    # Largest remainder: floor the exact shares, then hand leftovers to the
    # largest fractional parts, ties to the lowest index. Deterministic.
    exact = n * probs
    base = np.floor(exact)
    counts = base.astype(np.int64)
    rem = exact - base
    leftover = n - int(counts.sum())
    for _ in range(leftover):
        j = int(np.argmax(rem))
        counts[j] += 1
        rem[j] = -1.0
    return counts


def simulate_waves(
    rng: np.random.Generator,
    alpha: np.ndarray,
    beta: np.ndarray,
    theta: np.ndarray,
    n_waves: int,
    wave_size: int,
    mech_id: int,
    gamma: float,
    m: int,
    policy_id: int,
) -> np.ndarray:
    """Run the full wave loop of one experiment.

    ``alpha`` and ``beta`` are updated in place from prior to final
    posterior; the returned array holds per-wave per-arm counts.
    """
    k = alpha.shape[0]
    wave_counts = np.zeros((n_waves, k), dtype=np.int64)
    for t in range(n_waves):
        probs = wave_probs(rng, alpha, beta, mech_id, gamma, m)
        counts = allocate(rng, probs, wave_size, policy_id)
        for j in range(k):
            c = int(counts[j])
            if c > 0:
                successes = int(np.count_nonzero(rng.random(c) < theta[j]))
                alpha[j] += successes
                beta[j] += c - successes
        wave_counts[t] = counts
    return wave_counts
