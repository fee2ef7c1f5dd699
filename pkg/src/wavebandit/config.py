"""Experiment configuration: defaults, JSON loading, validation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from wavebandit.errors import ConfigError
from wavebandit.mechanisms import ALLOCATION_POLICIES, DEFAULT_GAMMA, MECHANISM_ORDER, MechanismKind

DEFAULT_WAVE_SIZES = (4, 10, 100)


@dataclass(frozen=True)
class ExperimentConfig:
    k_arms: int = 3
    n_total: int = 1000
    wave_sizes: tuple[int, ...] = DEFAULT_WAVE_SIZES
    mechanisms: tuple[str, ...] = MECHANISM_ORDER
    gamma: float = DEFAULT_GAMMA
    prior: tuple[float, float] = (1.0, 1.0)
    replications: int = 10_000
    mc_draws: int = 1000
    sp_draws: int = 10_000
    alpha: float = 0.05
    allocation_policy: str = "iid"
    master_seed: int = 0

    def __post_init__(self):
        if self.k_arms < 2:
            raise ConfigError("k_arms: need at least 2 arms")
        if self.n_total < 1:
            raise ConfigError("n_total: must be positive")
        if not self.wave_sizes:
            raise ConfigError("wave_sizes: must not be empty")
        for w in self.wave_sizes:
            if w < 1:
                raise ConfigError(f"wave_sizes: wave size {w} must be positive")
            if self.n_total % w != 0:
                raise ConfigError(
                    f"wave_sizes: n_total={self.n_total} is not divisible by wave size {w}"
                )
        if not self.mechanisms:
            raise ConfigError("mechanisms: must not be empty")
        for tag in self.mechanisms:
            if tag not in MECHANISM_ORDER:
                raise ConfigError(f"mechanisms: unknown mechanism {tag!r}")
        if len(set(self.mechanisms)) != len(self.mechanisms):
            raise ConfigError("mechanisms: duplicate entries")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("gamma: must lie in [0, 1]")
        if not (self.prior[0] > 0 and self.prior[1] > 0):
            raise ConfigError("prior: shape parameters must be positive")
        if self.replications < 1:
            raise ConfigError("replications: must be at least 1")
        if self.mc_draws < 1:
            raise ConfigError("mc_draws: must be at least 1")
        if self.sp_draws < 1:
            raise ConfigError("sp_draws: must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha: must lie in (0, 1)")
        if self.allocation_policy not in ALLOCATION_POLICIES:
            raise ConfigError(
                f"allocation_policy: {self.allocation_policy!r} not in {ALLOCATION_POLICIES}"
            )
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed: must fit in 64 bits")

    def mechanism_kinds(self) -> list[MechanismKind]:
        return [
            MechanismKind(tag, self.gamma if tag == "tempered" else None)
            for tag in self.mechanisms
        ]

    def waves_for(self, wave_size: int) -> int:
        return self.n_total // wave_size

    @property
    def cells_per_trial(self) -> int:
        return len(self.mechanisms) * len(self.wave_sizes)

    def to_dict(self) -> dict:
        return {
            "k_arms": self.k_arms,
            "n_total": self.n_total,
            "wave_sizes": list(self.wave_sizes),
            "mechanisms": list(self.mechanisms),
            "gamma": self.gamma,
            "prior": list(self.prior),
            "replications": self.replications,
            "mc_draws": self.mc_draws,
            "sp_draws": self.sp_draws,
            "alpha": self.alpha,
            "allocation_policy": self.allocation_policy,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("wave_sizes", "mechanisms", "prior"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return cls.from_dict(data)

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("ascii")).hexdigest()
