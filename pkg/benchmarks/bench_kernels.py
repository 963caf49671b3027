"""Time the numba kernels against the numpy fallback on representative sizes.

Run: python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from chanspec import kernels
from chanspec.kernels import _numpy


def _time(fn, repeat):
    fn()  # warm-up (and numba compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    m, q, deg = 4, 2, 3
    coef = rng.standard_normal((m, deg + 1)) + 1j * rng.standard_normal((m, deg + 1))
    expo = np.array([[40, 40], [40, 0], [0, 40], [0, 0]], float)
    roots = np.array([1.0, -1.0], complex)
    scales = np.ones(q, complex)
    z = rng.standard_normal(20000) + 1j * rng.standard_normal(20000)
    newton = rng.standard_normal(800) + 1j * rng.standard_normal(800)
    zr = rng.standard_normal(800) + 1j * rng.standard_normal(800)
    grid = rng.standard_normal(640000) + 1j * rng.standard_normal(640000)
    mat = rng.standard_normal((200, 200)) + 1j * rng.standard_normal((200, 200))
    return {
        "product_power_sum (20k points)": lambda impl: impl.product_power_sum(z, coef, expo, roots, scales),
        "aberth_correction (800 roots)": lambda impl: impl.aberth_correction(zr, newton),
        "log_abs_members (800x800 grid)": lambda impl: impl.log_abs_members(grid, expo, roots, scales),
        "lu_logdet (200x200)": lambda impl: impl.lu_logdet(mat),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    if kernels.numba_impl is None:
        print("numba unavailable or disabled; timing the numpy path only")
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, call in cases(rng).items():
        t_np = _time(lambda: call(_numpy), args.repeat)
        if kernels.numba_impl is not None:
            t_nb = _time(lambda: call(kernels.numba_impl), args.repeat)
            print(f"{name:34s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f}")
        else:
            print(f"{name:34s} {1e3 * t_np:11.2f} {'-':>11s} {'-':>8s}")


if __name__ == "__main__":
    main()
