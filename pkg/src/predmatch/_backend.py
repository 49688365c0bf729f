"""Backend selection for the hot kernels.

The matcher and the synthetic generator each have two interchangeable
implementations: a numba-jitted kernel and a pure numpy/Python fallback.
Setting the environment variable ``PREDMATCH_NO_NUMBA`` to anything other
than ``0`` (or leaving numba uninstalled) selects the fallback. Both paths
produce bit-identical results; ``benchmarks/bench_matcher.py`` compares
their speed.
"""

from __future__ import annotations

import os

ENV_FLAG = "PREDMATCH_NO_NUMBA"

_numba_available: bool | None = None


def numba_available() -> bool:
    global _numba_available
    if _numba_available is None:
        try:
            import numba  # noqa: F401

            _numba_available = True
        except ImportError:
            _numba_available = False
    return _numba_available


def numba_disabled_by_env() -> bool:
    return os.environ.get(ENV_FLAG, "0") not in ("", "0")


def default_backend() -> str:
    if numba_disabled_by_env() or not numba_available():
        return "numpy"
    return "numba"


def resolve_backend(backend: str | None) -> str:
    """Normalize a backend request ("numba", "numpy", or None for auto)."""
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    if backend == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
