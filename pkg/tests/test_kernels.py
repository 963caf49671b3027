import os
import subprocess
import sys

import numpy as np
import pytest

from chanspec import kernels
from chanspec.kernels import _numpy

numba_only = pytest.mark.skipif(kernels.numba_impl is None, reason="numba not available")


def _inputs(seed=0):
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    expo = np.array([[30, 30], [30, 0], [0, 0]], float)
    roots = np.array([1.0, -1.0 + 0.5j])
    scales = np.array([1.0, 2.0 - 1j])
    z = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    return z, coef, expo, roots, scales


@numba_only
def test_product_power_sum_parity():
    args = _inputs()
    a = _numpy.product_power_sum(*args)
    b = kernels.numba_impl.product_power_sum(*args)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-300)


@numba_only
def test_log_abs_members_parity_including_exact_root():
    z, _, expo, roots, scales = _inputs()
    z = np.concatenate([z, roots])
    np.testing.assert_allclose(
        _numpy.log_abs_members(z, expo, roots, scales), kernels.numba_impl.log_abs_members(z, expo, roots, scales), rtol=1e-12
    )


@numba_only
def test_aberth_and_logdet_parity():
    rng = np.random.default_rng(1)
    z = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    w = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    np.testing.assert_allclose(_numpy.aberth_correction(z, w), kernels.numba_impl.aberth_correction(z, w), rtol=1e-11)
    m = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    p1, l1 = _numpy.lu_logdet(m)
    p2, l2 = kernels.numba_impl.lu_logdet(m)
    assert abs(p1 - p2) < 1e-10 and abs(l1 - l2) < 1e-10


def test_product_power_sum_value_against_direct_formula():
    z, coef, expo, roots, scales = _inputs(2)
    F, dF, mag = kernels.product_power_sum(z[:5], coef, expo, roots, scales)
    direct = []
    for p in z[:5]:
        acc = 0
        for r in range(coef.shape[0]):
            a = np.polyval(coef[r][::-1], p)
            acc += a * np.prod(((p - roots) / scales) ** expo[r])
        direct.append(acc)
    # kernel outputs share a per-point scale; compare ratios
    direct = np.array(direct)
    ratio = F / direct
    np.testing.assert_allclose(ratio / ratio[0] * np.abs(ratio[0]) / np.abs(ratio), 1, rtol=1e-9)


def test_lu_logdet_matches_numpy():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    phase, logabs = kernels.lu_logdet(m)
    d = np.linalg.det(m)
    assert abs(phase * np.exp(logabs) - d) < 1e-9 * abs(d)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, CHANSPEC_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from chanspec import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
