"""Compiled and pure-Python kernels must agree."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from elpredict._core import _pykernels as py

ck = pytest.importorskip("elpredict._core._ckernels")

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, st.integers(1, 40), elements=finite))
def test_el_dual_agrees(z):
    sc, lc, stc, _ = ck.el_dual(z)
    sp, lp, stp, _ = py.el_dual(z)
    assert stc == stp
    if stc == 0:
        assert sc == pytest.approx(sp, rel=1e-9, abs=1e-12)
        assert lc == pytest.approx(lp, rel=1e-8, abs=1e-12)
    else:
        assert np.isinf(sc) and np.isinf(sp)


@pytest.mark.parametrize("h", [0.5, 1.0, 2.0, 4.0])
def test_weighted_scores_agree(h):
    rng = np.random.default_rng(1)
    x = rng.standard_t(0.7, 300) * 10.0
    y = rng.standard_normal(300)
    np.testing.assert_allclose(ck.weighted_scores(x, y, 0.3, h), py.weighted_scores(x, y, 0.3, h),
                               rtol=1e-13, atol=0)


def test_weighted_scores_huge_regressors_stay_finite():
    x = np.array([1e200, -1e300, 1e-300, 0.0])
    y = np.ones(4)
    for h in (1.0, 2.0, 4.0):
        for mod in (ck, py):
            z = mod.weighted_scores(x, y, 0.0, h)
            assert np.all(np.isfinite(z))
            np.testing.assert_allclose(z[:2], [1.0, -1.0])


def test_ar_filter_agrees():
    rng = np.random.default_rng(2)
    v = rng.standard_normal(1000)
    for b in ([], [-0.5], [0.3, 0.2], [0.5, -0.2, 0.1]):
        b = np.asarray(b, dtype=np.float64)
        np.testing.assert_allclose(ck.ar_filter(v, b), py.ar_filter(v, b), rtol=1e-12, atol=1e-12)


def test_ar1_levels_agree():
    e = np.random.default_rng(3).standard_normal(500)
    for phi in (0.0, 0.9, 1.0):
        np.testing.assert_allclose(ck.ar1_levels(e, 0.1, phi, 2.0), py.ar1_levels(e, 0.1, phi, 2.0),
                                   rtol=1e-11, atol=1e-10)


def test_bootstrap_betas_agree():
    rng = np.random.default_rng(4)
    u = rng.standard_normal((50, 99))
    v = rng.standard_normal((50, 99))
    for b in (np.zeros(0), np.array([-0.5])):
        bc = ck.bootstrap_betas(u, v, 0.1, 0.2, 0.0, 0.95, b, 0.0)
        bp = py.bootstrap_betas(u, v, 0.1, 0.2, 0.0, 0.95, b, 0.0)
        np.testing.assert_allclose(bc, bp, rtol=1e-9)


def test_bootstrap_betas_flag_constant_predictor():
    u = np.zeros((3, 10))
    v = np.zeros((3, 10))
    # phi = 0, theta = 0, x0 = 0: predictor identically zero
    for mod in (ck, py):
        assert np.all(np.isnan(mod.bootstrap_betas(u, v, 0.0, 1.0, 0.0, 0.0, np.zeros(0), 0.0)))


def test_env_var_forces_python_backend():
    env = dict(os.environ, ELPREDICT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import elpredict; print(elpredict.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_is_compiled():
    env = {k: v for k, v in os.environ.items() if k != "ELPREDICT_PURE_PYTHON"}
    out = subprocess.run([sys.executable, "-c", "import elpredict; print(elpredict.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
