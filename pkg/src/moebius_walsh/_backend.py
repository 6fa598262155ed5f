"""Kernel selection at import time.

The compiled Cython module is preferred; set ``MW_PURE_PYTHON=1`` to force the
numpy fallback (the benchmark and the backend-equivalence tests do this
per call through :func:`get_backend`).
"""
import os

from . import _pure

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("MW_PURE_PYTHON"):
    kernels = _compiled
    BACKEND = "cython"
else:
    kernels = _pure
    BACKEND = "python"


def available_backends():
    return ["python"] + (["cython"] if _compiled is not None else [])


def get_backend(name=None):
    if name is None:
        return kernels
    if name == "python":
        return _pure
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
