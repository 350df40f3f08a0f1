"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when it is
missing or when ``ANCILE_BACKEND=python`` is set in the environment.
"""
import os

from . import _pykernels

_forced = os.environ.get("ANCILE_BACKEND", "").strip().lower()

kernels = _pykernels
name = "python"

if _forced not in ("python", "py", "numpy"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        if _forced in ("cython", "compiled"):
            raise
    else:
        kernels = _compiled
        name = "cython"

KS, CVM, AD = _pykernels.KS, _pykernels.CVM, _pykernels.AD


def available():
    """Names of the backends importable in this environment."""
    out = ["python"]
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        pass
    else:
        out.append("cython")
    return out


def get(backend=None):
    if backend is None:
        return kernels
    if backend == "python":
        return _pykernels
    if backend == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {backend!r}")
