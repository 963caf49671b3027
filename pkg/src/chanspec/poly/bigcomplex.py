"""Arbitrary-precision complex scalars.

mpmath's ``mpc`` is the big-complex type; this module only adds the
precision ladder, a context manager and a finiteness guard.
"""
from contextlib import contextmanager

import mpmath

from ..errors import NumericError
from ..numbers import ExactComplex

BigComplex = mpmath.mpc

PRECISION_LADDER = (53, 128, 256, 512)


@contextmanager
def precision(bits: int):
    """Run a block at ``bits`` mantissa bits (mpmath's global context is restored after)."""
    with mpmath.workprec(int(bits)):
        yield


def current_bits() -> int:
    return mpmath.mp.prec


def tolerance(bits: int) -> float:
    """Default backward-residual tolerance at a given precision."""
    return 2.0 ** (-bits / 2)


def big(x) -> mpmath.mpc:
    """Convert a Python/numpy/exact number to ``mpc`` at the current precision."""
    if isinstance(x, ExactComplex):
        return x.to_mpc()
    if isinstance(x, mpmath.mpc):
        return +x  # rounds to the working precision
    return mpmath.mpc(complex(x)) if not isinstance(x, mpmath.mpf) else mpmath.mpc(x)


def check_finite(x, what="value"):
    if not (mpmath.isfinite(x.real) and mpmath.isfinite(x.imag)):
        raise NumericError(f"non-finite {what}: {x}")
    return x


def ladder_from(bits: int, max_bits: int = 512) -> list[int]:
    """Precision steps to try, starting at ``bits`` and climbing the ladder."""
    steps = [bits] + [b for b in PRECISION_LADDER if b > bits]
    return [b for b in steps if b <= max(max_bits, bits)]
