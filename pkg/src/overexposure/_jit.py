"""Optional numba acceleration.

Every hot kernel is written once as plain Python over numpy arrays and
wrapped here. Set ``OVEREXPOSURE_DISABLE_NUMBA=1`` to route all calls
through the pure numpy/Python path instead.
"""
from __future__ import annotations

import os

ENV_FLAG = "OVEREXPOSURE_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


def _requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and _requested()


def njit(fn):
    """Compile ``fn`` lazily with numba when available; otherwise return it unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
