"""Beta-Bernoulli conjugate inference for a set of treatment arms.

Closed-form moments and RMSE, posterior sampling, and the probability
that each arm has the highest mean outcome, computed two independent
ways: Monte Carlo over joint posterior draws (the hot path) and
Gauss-Legendre quadrature of the order-statistic integral (the oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import betainc
from scipy.stats import beta as beta_dist

from wavebandit.backend import get_kernels
from wavebandit.errors import ContractViolation, NumericRangeError

# The quadrature postcondition: per-arm integrals must already sum to 1
# up to this slack before renormalization, else the rule is too coarse.
QUAD_RENORM_TOL = 1e-6


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of one arm's Beta posterior (or prior)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ContractViolation(f"Beta shape parameters must be positive, got {self}")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self) -> float:
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1.0))


@dataclass(frozen=True)
class PosteriorState:
    """Ordered Beta posteriors, one per arm. Arm order is fixed for the
    life of an experiment."""

    arms: tuple[BetaParams, ...]

    def __post_init__(self):
        if len(self.arms) < 2:
            raise ContractViolation("a posterior state needs at least two arms")

    @classmethod
    def from_arrays(cls, alphas: Iterable[float], betas: Iterable[float]) -> "PosteriorState":
        return cls(tuple(BetaParams(a, b) for a, b in zip(alphas, betas, strict=True)))

    @classmethod
    def uniform_prior(cls, k: int, alpha0: float = 1.0, beta0: float = 1.0) -> "PosteriorState":
        return cls(tuple(BetaParams(alpha0, beta0) for _ in range(k)))

    def __len__(self) -> int:
        return len(self.arms)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([arm.alpha for arm in self.arms])

    @property
    def betas(self) -> np.ndarray:
        return np.array([arm.beta for arm in self.arms])

    @property
    def means(self) -> np.ndarray:
        return np.array([arm.mean for arm in self.arms])


@dataclass(frozen=True)
class OutcomeCounts:
    """Per-arm success/failure tallies observed in one wave."""

    successes: tuple[int, ...]
    failures: tuple[int, ...]

    def __post_init__(self):
        if len(self.successes) != len(self.failures):
            raise ContractViolation("successes and failures must have the same length")
        if any(s < 0 for s in self.successes) or any(f < 0 for f in self.failures):
            raise ContractViolation("outcome counts must be non-negative")


def update(state: PosteriorState, counts: OutcomeCounts) -> PosteriorState:
    """Conjugate update: alpha += successes, beta += failures, per arm."""
    if len(counts.successes) != len(state):
        raise ContractViolation(
            f"counts for {len(counts.successes)} arms applied to a {len(state)}-arm state"
        )
    return PosteriorState(
        tuple(
            BetaParams(arm.alpha + s, arm.beta + f)
            for arm, s, f in zip(state.arms, counts.successes, counts.failures)
        )
    )


def posterior_mean(p: BetaParams) -> float:
    return p.mean


def rmse(p: BetaParams, theta_star: float) -> float:
    """Root of the posterior-expected squared error to the true value.

    For a Beta posterior the integral collapses to
    sqrt((theta_star - mean)^2 + variance), which is exact.
    """
    if not 0.0 <= theta_star <= 1.0:
        raise ContractViolation(f"theta_star must lie in [0, 1], got {theta_star}")
    d = theta_star - p.mean
    return math.sqrt(d * d + p.variance)


def sample_posterior(p: BetaParams, rng: np.random.Generator, m: int) -> np.ndarray:
    """m independent draws from the arm's posterior."""
    if m < 1:
        raise ContractViolation("m must be at least 1")
    return rng.beta(p.alpha, p.beta, m)


def prob_best_mc(state: PosteriorState, m: int, rng: np.random.Generator) -> np.ndarray:
    """Monte Carlo probability that each arm is the best one.

    Per draw, one sample per arm; the strict argmax wins, exact ties
    (measure zero for continuous posteriors) go to the lowest index.
    The output is a length-K vector of win fractions.
    """
    if m < 1:
        raise ContractViolation("m must be at least 1")
    return get_kernels().prob_best(rng, state.alphas, state.betas, m)


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b), i.e. the Beta CDF."""
    if not 0.0 <= x <= 1.0:
        raise ContractViolation(f"x must lie in [0, 1], got {x}")
    return float(betainc(a, b, x))


@lru_cache(maxsize=8)
def _unit_leggauss(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [0, 1] under x = sin^2(pi t / 2).

    The substitution flattens the algebraic endpoint behavior of Beta
    densities with fractional shapes barely above 1, which plain
    Gauss-Legendre resolves too slowly; the returned weights absorb the
    Jacobian (pi/2) sin(pi t).
    """
    t, w = leggauss(nodes)
    t = (t + 1.0) / 2.0
    w = w / 2.0
    x = np.sin(np.pi * t / 2.0) ** 2
    return x, w * (np.pi / 2.0) * np.sin(np.pi * t)


def prob_best_quadrature(state: PosteriorState, nodes: int = 256) -> np.ndarray:
    """Quadrature evaluation of P(arm k is best), the oracle for
    :func:`prob_best_mc`.

    For each arm, integrates f_k(x) * prod_{j != k} F_j(x) over [0, 1]
    with a fixed Gauss-Legendre rule (f the Beta density, F its CDF).
    Components are renormalized to sum to 1; a renormalization
    correction of QUAD_RENORM_TOL or more means the rule is too coarse
    for the given shapes and raises NumericRangeError. Accurate results
    need nodes >= 64; sharper posteriors need more.
    """
    if nodes < 1:
        raise ContractViolation("nodes must be at least 1")
    x, w = _unit_leggauss(nodes)
    a = state.alphas[:, None]
    b = state.betas[:, None]
    dens = beta_dist.pdf(x[None, :], a, b)
    cdf = betainc(a, b, x[None, :])
    if not (np.isfinite(dens).all() and np.isfinite(cdf).all()):
        raise NumericRangeError(
            "non-finite Beta density/CDF values; shape parameters out of supported range"
        )
    k = len(state)
    raw = np.empty(k)
    for j in range(k):
        prod = w * dens[j]
        for i in range(k):
            if i != j:
                prod = prod * cdf[i]
        raw[j] = prod.sum()
    total = raw.sum()
    if not np.isfinite(total):
        raise NumericRangeError("non-finite quadrature total")
    if abs(1.0 - total) >= QUAD_RENORM_TOL:
        raise NumericRangeError(
            f"quadrature renormalization correction {abs(1.0 - total):.3e} "
            f"exceeds {QUAD_RENORM_TOL:.0e}; increase nodes"
        )
    return raw / total


def posterior_from_counts(
    prior: BetaParams, successes: Sequence[int], failures: Sequence[int]
) -> PosteriorState:
    """State reached from a shared prior after the given per-arm outcomes."""
    state = PosteriorState.uniform_prior(len(successes), prior.alpha, prior.beta)
    return update(state, OutcomeCounts(tuple(successes), tuple(failures)))
