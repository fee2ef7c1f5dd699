#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the probability-of-best kernel and full experiments at each wave
size on both backends, checks that results are byte-identical (the two
paths consume the same random stream), and prints a comparison table.

Usage: python benchmarks/backend_bench.py [--trials N] [--mc-draws M]
"""

import argparse
import time

import numpy as np

from wavebandit import kernels_numpy
from wavebandit.backend import numba_available
from wavebandit.seeding import make_rng

MECH_THOMPSON = kernels_numpy.MECH_THOMPSON
POLICY_IID = kernels_numpy.POLICY_IID


def time_prob_best(kernels, m, reps):
    alpha = np.array([8.0, 3.0, 5.0])
    beta = np.array([4.0, 6.0, 5.0])
    rng = make_rng(1)
    kernels.prob_best(rng, alpha, beta, m)  # warm up / jit compile
    rng = make_rng(2)
    start = time.perf_counter()
    for _ in range(reps):
        out = kernels.prob_best(rng, alpha, beta, m)
    return time.perf_counter() - start, out


def time_experiments(kernels, wave_size, trials, m):
    theta = np.array([0.75, 0.5, 0.25])
    n_waves = 1000 // wave_size
    results = []
    start = time.perf_counter()
    for trial in range(trials):
        rng = make_rng(100 + trial)
        alpha = np.ones(3)
        beta = np.ones(3)
        counts = kernels.simulate_waves(
            rng, alpha, beta, theta, n_waves, wave_size, MECH_THOMPSON, 0.0, m, POLICY_IID
        )
        results.append((counts.sum(axis=0), alpha.copy(), beta.copy()))
    return time.perf_counter() - start, results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20, help="experiments per wave size")
    parser.add_argument("--mc-draws", type=int, default=1000)
    args = parser.parse_args()

    if not numba_available():
        raise SystemExit("numba is not importable; nothing to compare")
    from wavebandit import kernels_numba

    print(f"{'benchmark':<28}{'numpy':>10}{'numba':>10}{'speedup':>9}  identical")
    print("-" * 68)

    for m in (1000, 10_000):
        t_np, out_np = time_prob_best(kernels_numpy, m, 200)
        t_nb, out_nb = time_prob_best(kernels_numba, m, 200)
        same = np.array_equal(out_np, out_nb)
        print(
            f"{'prob_best m=%d x200' % m:<28}{t_np:>9.3f}s{t_nb:>9.3f}s"
            f"{t_np / t_nb:>8.2f}x  {same}"
        )

    for wave_size in (4, 10, 100):
        t_np, res_np = time_experiments(kernels_numpy, wave_size, args.trials, args.mc_draws)
        t_nb, res_nb = time_experiments(kernels_numba, wave_size, args.trials, args.mc_draws)
        same = all(
            all(np.array_equal(a, b) for a, b in zip(x, y)) for x, y in zip(res_np, res_nb)
        )
        label = f"experiment N_t={wave_size} x{args.trials}"
        print(f"{label:<28}{t_np:>9.3f}s{t_nb:>9.3f}s{t_np / t_nb:>8.2f}x  {same}")


if __name__ == "__main__":
    main()
