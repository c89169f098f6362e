"""Kernel backend selection.

Hot loops ship in two flavours: numba ``@njit`` kernels and vectorised numpy
fallbacks. Numba is used when it imports cleanly unless the environment
variable ``FPLAB_NO_NUMBA`` is set to a truthy value.
"""
from __future__ import annotations

import importlib.util
import os
from contextlib import contextmanager

ENV_FLAG = "FPLAB_NO_NUMBA"

_TRUTHY = {"1", "true", "yes", "on"}


def numba_available() -> bool:
    return importlib.util.find_spec("numba") is not None


def _initial_choice() -> bool:
    if os.environ.get(ENV_FLAG, "").strip().lower() in _TRUTHY:
        return False
    return numba_available()


_use_numba = _initial_choice()


def use_numba() -> bool:
    return _use_numba


def current_backend() -> str:
    return "numba" if _use_numba else "numpy"


def set_backend(name: str) -> None:
    """Switch the process-wide kernel backend to ``"numba"`` or ``"numpy"``."""
    global _use_numba
    if name == "numba":
        if not numba_available():
            raise RuntimeError("numba is not installed")
        _use_numba = True
    elif name == "numpy":
        _use_numba = False
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextmanager
def backend(name: str):
    previous = current_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
