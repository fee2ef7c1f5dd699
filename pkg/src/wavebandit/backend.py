"""Kernel backend selection.

The hot kernels exist twice: numba @njit versions and pure-numpy
fallbacks with identical random-stream consumption. The environment
variable ``WAVEBANDIT_BACKEND`` picks one ("numba" or "numpy"); unset,
numba is used when importable. Selection is resolved lazily so tests can
flip the variable before first use.
"""

from __future__ import annotations

import os
from types import ModuleType

ENV_VAR = "WAVEBANDIT_BACKEND"
_BACKENDS = ("numba", "numpy")
_cache: dict[str, ModuleType] = {}


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def default_backend() -> str:
    return "numba" if numba_available() else "numpy"


def resolve_backend(name: str | None = None) -> str:
    """Backend name from the argument, the environment, or the default."""
    if name is None:
        name = os.environ.get(ENV_VAR, "").strip().lower() or None
    if name is None:
        return default_backend()
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {_BACKENDS}")
    return name


def get_kernels(name: str | None = None) -> ModuleType:
    """Kernel module for the requested (or environment-selected) backend."""
    name = resolve_backend(name)
    if name not in _cache:
        if name == "numba":
            from wavebandit import kernels_numba as mod
        else:
            from wavebandit import kernels_numpy as mod
        _cache[name] = mod
    return _cache[name]
