"""Numba @njit twins of the kernels in :mod:`wavebandit.kernels_numpy`.

Numba's new-style ``np.random.Generator`` support draws the same
sequences as numpy itself, so these kernels follow the stream contract
documented in the numpy module and produce byte-identical results.
``tests/test_backends.py`` pins that equivalence.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MECH_RA = 0
MECH_THOMPSON = 1
MECH_EXPLORATION = 2
MECH_TEMPERED = 3

POLICY_IID = 0
POLICY_LARGEST_REMAINDER = 1

EXPLORATION_EPS = 1e-12


@njit(cache=True)
def prob_best(rng, alpha, beta, m):
    k = alpha.shape[0]
    draws = np.empty((k, m))
    for j in range(k):
        draws[j] = rng.beta(alpha[j], beta[j], m)
    wins = np.zeros(k)
    for i in range(m):
        best = 0
        best_val = draws[0, i]
        for j in range(1, k):
            if draws[j, i] > best_val:
                best_val = draws[j, i]
                best = j
        wins[best] += 1.0
    return wins / m


@njit(cache=True)
def exploration_reweight(p):
    k = p.shape[0]
    w = np.empty(k)
    s = 0.0
    for j in range(k):
        w[j] = p[j] * (1.0 - p[j])
        s += w[j]
    if s < EXPLORATION_EPS:
        return p.copy()
    return w / s


@njit(cache=True)
def temper(p, gamma):
    return (1.0 - gamma) * p + gamma / p.shape[0]


@njit(cache=True)
def wave_probs(rng, alpha, beta, mech_id, gamma, m):
    k = alpha.shape[0]
    if mech_id == MECH_RA:
        return np.full(k, 1.0 / k)
    p = prob_best(rng, alpha, beta, m)
    if mech_id == MECH_THOMPSON:
        return p
    if mech_id == MECH_EXPLORATION:
        return exploration_reweight(p)
    return temper(p, gamma)


@njit(cache=True)
def allocate(rng, probs, n, policy_id):
    k = probs.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    if policy_id == POLICY_IID:
        cum = np.empty(k)
        acc = 0.0
        for j in range(k):
            acc += probs[j]
            cum[j] = acc
        u = rng.random(n)
        for i in range(n):
            arm = k - 1
            for j in range(k):
                if u[i] < cum[j]:
                    arm = j
                    break
            counts[arm] += 1
        return counts
    exact = n * probs
    base = np.floor(exact)
    rem = exact - base
    total = 0
    for j in range(k):
        counts[j] = np.int64(base[j])
        total += counts[j]
    leftover = n - total
    for _ in range(leftover):
        best = 0
        for j in range(1, k):
            if rem[j] > rem[best]:
                best = j
        counts[best] += 1
        rem[best] = -1.0
    return counts


@njit(cache=True)
def simulate_waves(rng, alpha, beta, theta, n_waves, wave_size, mech_id, gamma, m, policy_id):
    k = alpha.shape[0]
    wave_counts = np.zeros((n_waves, k), dtype=np.int64)
    for t in range(n_waves):
        probs = wave_probs(rng, alpha, beta, mech_id, gamma, m)
        counts = allocate(rng, probs, wave_size, policy_id)
        for j in range(k):
            c = counts[j]
            if c > 0:
                u = rng.random(c)
                successes = 0
                for i in range(c):
                    if u[i] < theta[j]:
                        successes += 1
                alpha[j] += successes
                beta[j] += c - successes
            wave_counts[t, j] = counts[j]
    return wave_counts
