"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``CHANSPEC_DISABLE_NUMBA`` is unset (or ``0``). Both paths expose
the same four functions; callers always go through this module.
"""
import os

import numpy as np

from . import _numpy as numpy_impl

_disabled = os.environ.get("CHANSPEC_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

numba_impl = None
if not _disabled:
    try:
        from . import _numba as numba_impl
    except ImportError:  # numba missing or broken
        numba_impl = None

BACKEND = "numba" if numba_impl is not None else "numpy"
_impl = numba_impl if numba_impl is not None else numpy_impl


def _c(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def _f(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def product_power_sum(z, coef, expo, roots, scales):
    return _impl.product_power_sum(_c(np.atleast_1d(z)), _c(coef), _f(expo), _c(roots), _c(scales))


def aberth_correction(z, newton):
    return _impl.aberth_correction(_c(z), _c(newton))


def log_abs_members(z, expo, roots, scales):
    return _impl.log_abs_members(_c(np.ravel(z)), _f(expo), _c(roots), _c(scales))


def lu_logdet(mat):
    phase, logabs = _impl.lu_logdet(_c(mat))
    return complex(phase), float(logabs)


__all__ = [
    "BACKEND",
    "numpy_impl",
    "numba_impl",
    "product_power_sum",
    "aberth_correction",
    "log_abs_members",
    "lu_logdet",
]
