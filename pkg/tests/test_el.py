import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from elpredict import (
    DgpConfig,
    InterceptMode,
    InvalidSampleError,
    RegressionSample,
    SolverError,
    WeightSpec,
    chi_square_quantile,
    el_test,
    gen_sample,
    log_el_ratio,
    score_root,
    solve_lagrange,
    weighted_scores,
)
from elpredict.el import design
from oracles import primal_statistic


def bisect_dual(z, iters=400):
    z = np.asarray(z, dtype=float)
    lo, hi = -1.0 / z.max(), -1.0 / z.min()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.sum(z / (1.0 + mid * z)) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------- weights

@pytest.mark.parametrize("h", [0.5, 1.0, 2.0, 4.0])
def test_weight_shape(h):
    w = WeightSpec(h)
    assert w(0.0) == 1.0
    assert w(1.0) == pytest.approx(2.0 ** (1.0 / h))
    t = np.linspace(-50, 50, 1001)
    assert np.all(w(t) >= 1.0)
    assert np.all(w(t) >= np.abs(t))
    assert w(1e40) / 1e40 == pytest.approx(1.0, rel=1e-12)


def test_weight_h2_is_sqrt():
    t = np.array([-3.0, 0.0, 0.4, 7.0])
    np.testing.assert_allclose(WeightSpec(2.0)(t), np.sqrt(1 + t**2), rtol=1e-15)


@pytest.mark.parametrize("h", [0.0, -1.0, math.inf, math.nan])
def test_weight_rejects_bad_exponent(h):
    with pytest.raises(InvalidSampleError):
        WeightSpec(h)


# ---------------------------------------------------------------- samples

def test_sample_validation():
    with pytest.raises(InvalidSampleError):
        RegressionSample([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(InvalidSampleError):
        RegressionSample([1.0, 2.0, np.nan], [1.0, 2.0])
    with pytest.raises(InvalidSampleError):
        RegressionSample([1.0, 2.0], [1.0])
    s = RegressionSample([1.0, 2.0, 3.0], [1.0, 2.0])
    with pytest.raises(InvalidSampleError):
        weighted_scores(s, 0.0, mode="unknown")
    with pytest.raises(InvalidSampleError):
        weighted_scores(s, math.nan)
    with pytest.raises(InvalidSampleError):
        weighted_scores(s, 0.0, mode="sideways")


# ---------------------------------------------------------------- scores

def test_scores_unit_first_regressor():
    x = np.array([1.0, 0.0, 0.0, 0.0])
    y = np.array([0.7, -0.2, 1.1])
    z = weighted_scores(RegressionSample(x, y), 0.4)
    assert z[0] == pytest.approx((0.7 - 0.4) / math.sqrt(2.0), rel=1e-15)
    np.testing.assert_array_equal(z[1:], 0.0)


def test_scores_vanish_on_exact_line():
    x = np.array([0.3, -1.0, 2.5, 0.7, 4.0])
    s = RegressionSample(x, 1.7 * x[:-1])
    for mode in ("known", "unknown"):
        np.testing.assert_allclose(weighted_scores(s, 1.7, mode=mode), 0.0, atol=1e-15)


def test_scores_hand_evaluation(small_sample):
    # scalar re-evaluation, no numpy vector path
    xs = [0.5, 1.2, -0.3, 0.8, 2.0]
    ys = [1.0, -0.5, 0.7, 1.5]
    expected = [(ys[t] - 0.3 * xs[t]) * xs[t] / math.sqrt(1.0 + xs[t] ** 2) for t in range(4)]
    np.testing.assert_allclose(weighted_scores(small_sample, 0.3), expected, rtol=1e-14)


def test_unknown_intercept_transform_by_hand():
    x = np.array([0.1, 0.5, -0.4, 1.0, 2.0, -1.5, 0.25, 3.0])  # n = 7, m = 3
    y = np.array([1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0])
    s = RegressionSample(x, y)
    beta = -0.2
    m = 3
    exp = []
    for t in range(1, m + 1):
        yt = y[t - 1] - y[t + m - 1]          # Y_t - Y_{t+m}
        xt = x[t - 1] - x[t - 1 + m]          # X_{t-1} - X_{t-1+m}
        exp.append((yt - beta * xt) * xt / math.sqrt(1 + xt * xt))
    np.testing.assert_allclose(weighted_scores(s, beta, mode="unknown"), exp, rtol=1e-14)


def test_unknown_intercept_keeps_zero_regressors():
    x = np.array([1.0, 2.0, 1.0, 2.0, 5.0])  # X~_0 = X_0 - X_2 = 0
    y = np.array([0.5, 0.1, 0.9, 0.3])
    z = weighted_scores(RegressionSample(x, y), 0.0, mode="unknown")
    assert z.shape == (2,)
    assert z[0] == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.sampled_from([1.0, 2.0, 4.0]))
def test_score_magnitude_bounded_by_residual(seed, beta, h):
    rng = np.random.default_rng(seed)
    x = rng.standard_t(1.0, 31) * 3
    y = rng.standard_normal(30)
    z = weighted_scores(RegressionSample(x, y), beta, WeightSpec(h))
    assert np.all(np.abs(z) <= np.abs(y - beta * x[:-1]) * (1 + 1e-15))


# ---------------------------------------------------------------- dual

def test_dual_symmetric():
    lam, ok = solve_lagrange([1.0, -1.0])
    assert ok and lam == 0.0


def test_dual_all_zero():
    assert solve_lagrange([0.0, 0.0, 0.0]) == (0.0, True)


@pytest.mark.parametrize("z", [[2.0, 2.0, 2.0], [-1.0, -3.0], [0.0, 1.0, 2.0], [0.0, -1.0]])
def test_dual_hull_violation(z):
    lam, ok = solve_lagrange(z)
    assert not ok


def test_dual_matches_bisection_oracle():
    z = [3.0, -1.0, -1.0]
    lam, ok = solve_lagrange(z)
    assert ok
    assert lam == pytest.approx(bisect_dual(z), abs=1e-10)
    assert lam == pytest.approx(1.0 / 9.0, abs=1e-10)  # closed form for this case


def test_dual_empty():
    with pytest.raises(InvalidSampleError):
        solve_lagrange([])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-1e4, 1e4, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-100),
                min_size=2, max_size=60))
def test_dual_root_inside_bracket(zs):
    z = np.asarray(zs)
    assume(z.min() < 0 < z.max())
    lam, ok = solve_lagrange(z)
    assert ok
    assert -1.0 / z.max() < lam < -1.0 / z.min()
    assert np.all(1.0 + lam * z > 0)
    g = np.sum(z / (1.0 + lam * z))
    # residual within tolerance unless the root sits at machine-precision distance from an edge
    oracle = bisect_dual(z)
    assert abs(g) <= 1e-10 * z.size * np.abs(z).max() or lam == pytest.approx(oracle, rel=1e-12)


def test_dual_monotone():
    z = np.array([4.0, -0.5, 1.0, -2.0, -0.1])
    lams = np.linspace(-1 / z.max(), -1 / z.min(), 1002)[1:-1]
    g = np.array([np.sum(z / (1 + l * z)) for l in lams])
    assert np.all(np.diff(g) < 0)


def test_solver_error_is_distinct_from_hull(monkeypatch):
    from elpredict import el

    monkeypatch.setattr(el.kernels, "solve_dual", lambda z: (0.3, 2, 200))
    with pytest.raises(SolverError):
        el.solve_lagrange([1.0, -1.0])


# ---------------------------------------------------------------- statistic

def test_statistic_zero_when_scores_average_zero():
    x = np.array([1.0, -1.0, 2.0, 0.5])
    y = np.array([1.0, 1.0, 0.0])  # beta = 0: z = (1, -1, 0) / sqrt(2)
    res = log_el_ratio(RegressionSample(x, y), 0.0)
    assert res.statistic == 0.0 and res.lam == 0.0 and res.p_value == 1.0 and res.hull_ok


def test_statistic_hull_sentinel():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    y = np.array([5.0, 6.0, 7.0])
    res = log_el_ratio(RegressionSample(x, y), 0.0)
    assert not res.hull_ok
    assert math.isinf(res.statistic) and res.p_value == 0.0


def test_statistic_matches_primal_n6():
    s = gen_sample(DgpConfig(n=6, phi=1.0, nu=4, seed=5))
    s = RegressionSample(s.x, s.y)
    beta = score_root(s) + 0.05
    res = log_el_ratio(s, beta)
    assert res.hull_ok
    assert res.statistic == pytest.approx(primal_statistic(weighted_scores(s, beta)), abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 8), st.floats(-1.0, 1.0))
def test_dual_primal_equivalence(seed, n, shift):
    s = gen_sample(DgpConfig(n=n, phi=0.9, nu=1.5, seed=seed))
    beta = score_root(s) + shift * 0.2
    res = log_el_ratio(s, beta)
    assume(res.hull_ok and res.statistic < 30)
    assert res.statistic == pytest.approx(primal_statistic(weighted_scores(s, beta)), abs=1e-6)


@pytest.mark.parametrize("mode", ["known", "unknown"])
def test_minimum_is_zero_at_score_root(dgp_sample, mode):
    b = score_root(dgp_sample, mode=mode)
    assert log_el_ratio(dgp_sample, b, mode=mode).statistic == pytest.approx(0.0, abs=1e-20)
    for d in (-1e-3, 1e-3):
        assert log_el_ratio(dgp_sample, b + d, mode=mode).statistic > 0


def _dyadic_sample(rng, n):
    x = np.cumsum(rng.standard_normal(n + 1))
    y = rng.integers(-(2**21), 2**21, n) / 2.0**20  # |y| < 2, exact under the shifts below
    return x, y


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([-1e6, 3.7, 1e6]), st.floats(-3, 3))
def test_location_equivariance_bitwise(seed, c, beta):
    rng = np.random.default_rng(seed)
    x, y = _dyadic_sample(rng, 40)
    a = log_el_ratio(RegressionSample(x, y), beta, mode="unknown")
    b = log_el_ratio(RegressionSample(x, y + c), beta, mode="unknown")
    assert a.statistic == b.statistic or (math.isinf(a.statistic) and math.isinf(b.statistic))
    assert a.lam == b.lam or (math.isnan(a.lam) and math.isnan(b.lam))


def test_scale_equivariance_of_statistic(dgp_sample):
    s = dgp_sample
    scaled = RegressionSample(s.x, 3.0 * s.y)
    for beta in (-0.2, 0.0, 0.05):
        a = log_el_ratio(s, beta)
        b = log_el_ratio(scaled, 3.0 * beta)
        assert b.statistic == pytest.approx(a.statistic, rel=1e-9)
        assert b.lam == pytest.approx(a.lam / 3.0, rel=1e-9)


def test_design_modes_accept_strings(small_sample):
    xk, _ = design(small_sample, "known")
    assert xk.shape == (4,)
    xu, yu = design(small_sample, InterceptMode.UNKNOWN)
    assert xu.shape == yu.shape == (2,)


# ---------------------------------------------------------------- test decision

def test_el_test_accepts_at_zero_statistic():
    x = np.array([1.0, -1.0, 2.0, 0.5])
    y = np.array([1.0, 1.0, 0.0])
    for level in (0.5, 0.9, 0.99):
        assert not el_test(RegressionSample(x, y), 0.0, level).reject


def test_el_test_rejects_on_hull_violation():
    s = RegressionSample([1.0, 2.0, 3.0, 4.0], [5.0, 6.0, 7.0])
    for level in (0.01, 0.5, 0.999):
        d = el_test(s, 0.0, level)
        assert d.reject and d.p_value == 0.0


def test_el_test_threshold_between_levels(dgp_sample):
    # pick beta0 where the statistic is exactly 3.0
    b0 = score_root(dgp_sample)
    beta = brentq(lambda b: log_el_ratio(dgp_sample, b).statistic - 3.0, b0, b0 + 1.0, xtol=1e-15)
    d90 = el_test(dgp_sample, beta, 0.90)
    d95 = el_test(dgp_sample, beta, 0.95)
    assert d90.statistic == pytest.approx(3.0, abs=1e-8)
    assert d90.critical_value == pytest.approx(2.705543, abs=1e-6)
    assert d95.critical_value == pytest.approx(3.841459, abs=1e-6)
    assert d90.reject and not d95.reject


def test_el_test_level_validation(dgp_sample):
    with pytest.raises(InvalidSampleError):
        el_test(dgp_sample, 0.0, 1.0)


def test_critical_value_is_chi2_quantile():
    assert chi_square_quantile(0.9) == pytest.approx(2.705543, abs=1e-6)
