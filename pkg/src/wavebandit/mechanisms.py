"""Assignment mechanisms: per-wave probabilities and integer allocations.

Four mechanisms are supported. Random assignment (RA) is the uniform
baseline. Thompson assigns with the posterior probability of being the
best arm. Exploration reweights the Thompson vector by p(1-p) to gain
power against suboptimal arms. Tempered blends Thompson with uniform
through a mixing weight gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wavebandit.backend import get_kernels
from wavebandit.errors import ContractViolation
from wavebandit.posterior import PosteriorState

MECHANISM_ORDER = ("ra", "thompson", "exploration", "tempered")
ALLOCATION_POLICIES = ("iid", "largest-remainder")

DEFAULT_GAMMA = 0.2


@dataclass(frozen=True)
class MechanismKind:
    """One of the four assignment mechanisms; gamma only for tempered."""

    tag: str
    gamma: float | None = None

    def __post_init__(self):
        if self.tag not in MECHANISM_ORDER:
            raise ContractViolation(f"unknown mechanism {self.tag!r}; expected one of {MECHANISM_ORDER}")
        if self.tag == "tempered":
            if self.gamma is None or not 0.0 <= self.gamma <= 1.0:
                raise ContractViolation("tempered needs gamma in [0, 1]")
        elif self.gamma is not None:
            raise ContractViolation(f"gamma is only meaningful for tempered, not {self.tag!r}")

    @property
    def mech_id(self) -> int:
        return MECHANISM_ORDER.index(self.tag)


def ra() -> MechanismKind:
    return MechanismKind("ra")


def thompson() -> MechanismKind:
    return MechanismKind("thompson")


def exploration() -> MechanismKind:
    return MechanismKind("exploration")


def tempered(gamma: float = DEFAULT_GAMMA) -> MechanismKind:
    return MechanismKind("tempered", gamma)


def assignment_probs(
    kind: MechanismKind,
    state: PosteriorState,
    m: int,
    rng: np.random.Generator | None,
) -> np.ndarray:
    """Length-K simplex vector of assignment probabilities for one wave.

    RA ignores the posterior (and the rng). The adaptive mechanisms
    estimate the Thompson vector from m joint posterior draws and then
    transform it. Exploration with a degenerate denominator (all mass on
    one arm) falls back to the Thompson vector.
    """
    if kind.tag == "ra":
        return np.full(len(state), 1.0 / len(state))
    if m < 1:
        raise ContractViolation("m must be at least 1 for adaptive mechanisms")
    if rng is None:
        raise ContractViolation(f"{kind.tag} needs an rng")
    kernels = get_kernels()
    gamma = kind.gamma if kind.gamma is not None else 0.0
    return kernels.wave_probs(rng, state.alphas, state.betas, kind.mech_id, gamma, m)


def exploration_reweight(p: np.ndarray) -> np.ndarray:
    """The Exploration transform on an explicit Thompson vector."""
    return get_kernels().exploration_reweight(np.asarray(p, dtype=np.float64))


def temper(p: np.ndarray, gamma: float) -> np.ndarray:
    """The Tempered blend on an explicit Thompson vector."""
    return get_kernels().temper(np.asarray(p, dtype=np.float64), gamma)


def allocate(
    probs: np.ndarray,
    n_t: int,
    policy: str = "iid",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Turn wave probabilities into per-arm participant counts summing to n_t.

    "iid" assigns each participant by an independent categorical draw;
    "largest-remainder" floors the exact shares and hands leftovers to
    the largest fractional parts (deterministic, ties to lowest index).
    """
    if n_t < 1:
        raise ContractViolation("n_t must be at least 1")
    if policy not in ALLOCATION_POLICIES:
        raise ContractViolation(f"unknown policy {policy!r}; expected one of {ALLOCATION_POLICIES}")
    if policy == "iid" and rng is None:
        raise ContractViolation("iid allocation needs an rng")
    policy_id = ALLOCATION_POLICIES.index(policy)
    if rng is None:
        # largest remainder consumes no randomness, but the numba kernel
        # still needs a typed Generator argument
        rng = _UNUSED_RNG
    return get_kernels().allocate(rng, np.asarray(probs, dtype=np.float64), n_t, policy_id)


_UNUSED_RNG = np.random.default_rng(0)
