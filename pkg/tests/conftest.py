import numpy as np
import pytest

from wavebandit.losses import LossVector
from wavebandit.store import TrialRecord


def make_record(
    trial: int,
    mechanism: str,
    wave_size: int = 10,
    *,
    r_sample: float = 0.1,
    r_policy: float = 0.0,
    prec_best: float = 0.05,
    prec_avg: float = 0.05,
    sp: int = 0,
    theta_star=(0.6, 0.5, 0.4),
    counts=(400, 300, 300),
    seed: int = 0,
) -> TrialRecord:
    """Synthetic record for analysis tests; posteriors filled consistently."""
    losses = LossVector(r_sample, r_policy, prec_best, prec_avg, sp)
    alpha = tuple(1.0 + c * t for c, t in zip(counts, theta_star))
    beta = tuple(1.0 + c - (a - 1.0) for c, a in zip(counts, alpha))
    return TrialRecord(
        trial=trial,
        mechanism=mechanism,
        wave_size=wave_size,
        theta_star=tuple(theta_star),
        losses=losses,
        counts=tuple(counts),
        alpha_final=alpha,
        beta_final=beta,
        seed=seed,
        tie_flags={"truth_tie": False, "khat_tie": False},
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
