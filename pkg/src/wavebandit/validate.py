"""Oracle suite behind the ``validate`` subcommand.

Each check compares two independent routes to the same quantity (Monte
Carlo vs quadrature, closed form vs sampling, algebraic identities) and
reports its maximum deviation against a fixed threshold. Deterministic
given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wavebandit.mechanisms import exploration_reweight, ra, tempered, thompson, assignment_probs
from wavebandit.posterior import (
    BetaParams,
    PosteriorState,
    prob_best_mc,
    prob_best_quadrature,
    rmse,
)
from wavebandit.seeding import make_rng

DEFAULT_SEED = 20240817

MC_VS_QUAD_TOL = 5e-3
QUAD_ANALYTIC_TOL = 1e-6
RMSE_MC_TOL = 5e-3
ALGEBRA_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    threshold: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return (
            f"{status} {self.name}: max deviation {self.deviation:.3e}"
            f" vs threshold {self.threshold:.0e}{extra}"
        )


def _random_state(rng: np.random.Generator, k: int = 3, hi: float = 200.0) -> PosteriorState:
    alphas = rng.uniform(1.0, hi, k)
    betas = rng.uniform(1.0, hi, k)
    return PosteriorState.from_arrays(alphas, betas)


def check_mc_vs_quadrature(
    seed: int, states: int = 50, m: int = 200_000, nodes: int = 256
) -> CheckResult:
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(states):
        state = _random_state(rng)
        mc = prob_best_mc(state, m, rng)
        quad = prob_best_quadrature(state, nodes)
        worst = max(worst, float(np.abs(mc - quad).max()))
    return CheckResult(
        "prob-best-mc-vs-quadrature", worst, MC_VS_QUAD_TOL, worst < MC_VS_QUAD_TOL,
        f"{states} random 3-arm states, m={m}, nodes={nodes}",
    )


def check_quadrature_analytic(nodes: int = 256) -> CheckResult:
    state = PosteriorState((BetaParams(2, 1), BetaParams(1, 1)))
    quad = prob_best_quadrature(state, nodes)
    worst = float(np.abs(quad - np.array([2.0 / 3.0, 1.0 / 3.0])).max())
    return CheckResult(
        "quadrature-two-arm-analytic", worst, QUAD_ANALYTIC_TOL, worst < QUAD_ANALYTIC_TOL,
        "Beta(2,1) vs Beta(1,1) against the exact (2/3, 1/3)",
    )


def check_rmse_closed_vs_mc(seed: int, cases: int = 50, m: int = 100_000) -> CheckResult:
    rng = make_rng(seed + 1)
    worst = 0.0
    for _ in range(cases):
        p = BetaParams(rng.uniform(1.0, 200.0), rng.uniform(1.0, 200.0))
        theta_star = float(rng.random())
        draws = rng.beta(p.alpha, p.beta, m)
        mc = math.sqrt(float(np.mean((theta_star - draws) ** 2)))
        worst = max(worst, abs(mc - rmse(p, theta_star)))
    return CheckResult(
        "rmse-closed-form-vs-mc", worst, RMSE_MC_TOL, worst < RMSE_MC_TOL,
        f"{cases} random (alpha, beta, theta*), m={m}",
    )


def check_mechanism_algebra(seed: int, m: int = 20_000) -> CheckResult:
    state = PosteriorState.from_arrays([7.0, 3.0, 2.0], [2.0, 5.0, 4.0])
    p_thompson = assignment_probs(thompson(), state, m, make_rng(seed + 2))
    p_gamma0 = assignment_probs(tempered(0.0), state, m, make_rng(seed + 2))
    p_gamma1 = assignment_probs(tempered(1.0), state, m, make_rng(seed + 2))
    p_ra = assignment_probs(ra(), state, m, None)
    worst = float(np.abs(p_gamma0 - p_thompson).max())
    worst = max(worst, float(np.abs(p_gamma1 - p_ra).max()))
    expected = np.array([25.0, 21.0, 16.0]) / 62.0
    got = exploration_reweight(np.array([0.5, 0.3, 0.2]))
    worst = max(worst, float(np.abs(got - expected).max()))
    return CheckResult(
        "mechanism-algebra", worst, ALGEBRA_TOL, worst < ALGEBRA_TOL,
        "tempered endpoints vs thompson/ra; exploration reweighting of (0.5, 0.3, 0.2)",
    )


def run_checks(seed: int = DEFAULT_SEED, quad_nodes: int = 256) -> list[CheckResult]:
    """The full oracle suite; any raised error becomes a failed check."""
    suite = (
        ("prob-best-mc-vs-quadrature", lambda: check_mc_vs_quadrature(seed, nodes=quad_nodes)),
        ("quadrature-two-arm-analytic", lambda: check_quadrature_analytic(nodes=quad_nodes)),
        ("rmse-closed-form-vs-mc", lambda: check_rmse_closed_vs_mc(seed)),
        ("mechanism-algebra", lambda: check_mechanism_algebra(seed)),
    )
    results = []
    for name, check in suite:
        try:
            results.append(check())
        except Exception as exc:  # a crashed oracle is a failed oracle
            results.append(CheckResult(name, math.inf, 0.0, False, f"error: {exc}"))
    return results
