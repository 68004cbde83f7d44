"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting
``EDSAFFINE_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from edsaffine import _kernels_py

if os.environ.get("EDSAFFINE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from edsaffine import _kernels_c as _impl
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"

poly_mul = _impl.poly_mul
poly_eval_batch = _impl.poly_eval_batch

__all__ = ["BACKEND", "poly_mul", "poly_eval_batch"]
