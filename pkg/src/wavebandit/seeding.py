"""Deterministic seed derivation for simulation coordinates.

Every experiment cell (trial, mechanism, wave size) gets its own 64-bit
seed mixed from the master seed with SHA-256, so results depend only on
the coordinates and never on scheduling or worker count. Truth vectors
use a stream keyed by (master, trial) alone, which is what keeps the
same truth paired across all mechanism/wave-size cells of a trial.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _digest64(label: str) -> int:
    digest = hashlib.sha256(label.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_seed(master_seed: int, trial: int, mechanism_id: int, wave_size: int) -> int:
    """64-bit seed for one experiment cell."""
    return _digest64(f"cell:{master_seed}:{trial}:{mechanism_id}:{wave_size}")


def truth_seed(master_seed: int, trial: int) -> int:
    """64-bit seed for a trial's truth vector, independent of mechanism and wave size."""
    return _digest64(f"truth:{master_seed}:{trial}")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
