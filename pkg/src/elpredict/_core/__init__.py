"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is used when it
is missing or when ``ELPREDICT_PURE_PYTHON`` is set to a truthy value.
"""
import os

from . import _pykernels

_want_pure = os.environ.get("ELPREDICT_PURE_PYTHON", "").lower() in ("1", "true", "yes")

if _want_pure:
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"

STATUS_OK = 0
STATUS_HULL = 1
STATUS_NOCONV = 2

__all__ = ["kernels", "BACKEND", "STATUS_OK", "STATUS_HULL", "STATUS_NOCONV"]
