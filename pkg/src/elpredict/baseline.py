"""Least-squares baseline: LSE slope, full-system OLS fit, residual bootstrap test."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._core import kernels
from .el import DegenerateSampleError, InvalidSampleError, RegressionSample


def lse_beta(sample: RegressionSample) -> float:
    """OLS slope of Y_t on (1, X_{t-1})."""
    return _slope(sample.xlag, sample.y)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    if not sxx > 0.0:
        raise DegenerateSampleError("predictor is constant; slope is unidentified")
    return float(np.dot(xc, y - y.mean())) / sxx


@dataclass(frozen=True)
class LseFit:
    alpha_hat: float
    beta_hat: float
    theta_hat: float
    phi_hat: float
    b_hat: np.ndarray
    u_resid: np.ndarray  # t = 1..n
    v_resid: np.ndarray  # t = p+1..n
    sigma_u_hat: float
    sigma_v_hat: float

    @property
    def p(self) -> int:
        return self.b_hat.shape[0]

    @property
    def sigma_ratio(self) -> float:
        return self.sigma_v_hat / self.sigma_u_hat


def _ols_intercept(x: np.ndarray, y: np.ndarray, what: str) -> tuple[float, float, np.ndarray]:
    design = np.column_stack((np.ones_like(x), x))
    if np.linalg.matrix_rank(design) < 2:
        raise DegenerateSampleError(f"{what} design is rank deficient")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(coef[0]), float(coef[1]), resid


def fit_full_model(sample: RegressionSample, p: int = 0) -> LseFit:
    """OLS fit of both equations plus an AR(p) for the predictor's errors.

    Residual scales are degrees-of-freedom corrected: ``n - 2`` for U, and for
    V the ``n - p`` AR residuals less the ``p + 2`` fitted coefficients.
    """
    n = sample.n
    p = int(p)
    if p < 0:
        raise InvalidSampleError("lag order must be nonnegative")
    if not n > p + 3:
        raise InvalidSampleError(f"need n > p + 3, got n={n}, p={p}")
    alpha, beta, u = _ols_intercept(sample.xlag, sample.y, "Y-equation")
    theta, phi, e = _ols_intercept(sample.x[:-1], sample.x[1:], "X-equation")
    if p == 0:
        b = np.zeros(0)
        v = e.copy()
    else:
        lags = np.column_stack([e[p - i - 1:n - i - 1] for i in range(p)])
        target = e[p:]
        b, *_ = np.linalg.lstsq(lags, target, rcond=None)
        v = target - lags @ b
    sigma_u = math.sqrt(float(np.dot(u, u)) / (n - 2))
    sigma_v = math.sqrt(float(np.dot(v, v)) / (v.shape[0] - 2 - p))
    return LseFit(alpha, beta, theta, phi, np.asarray(b, dtype=np.float64), u, v, sigma_u, sigma_v)


@dataclass(frozen=True)
class BootstrapDecision:
    reject: bool
    beta_hat: float
    lower: float
    upper: float
    resamples: int
    degenerate: int


CONVENTIONS = ("basic", "percentile", "normal")


def bootstrap_lse_test(sample: RegressionSample, beta0: float = 0.0, p: int = 1, level: float = 0.10,
                       B: int = 1000, rng: np.random.Generator | int | None = None,
                       convention: str = "basic") -> BootstrapDecision:
    """Residual-bootstrap test of beta = beta0 based on the LSE.

    ``level`` is the size of the test. Residual pairs (U_t, V_t) are resampled
    jointly, n - 1 at a time, the system is regenerated from the fitted
    parameters starting at the observed X_0 (pre-sample AR errors zero), and the
    slope is refit on (X*_{t-1}, Y*_t), t = 2..n-1.

    ``convention`` picks the interval built from the bootstrap slopes beta*:
    ``basic`` is [2 beta_hat - q_hi, 2 beta_hat - q_lo], ``percentile`` is
    [q_lo, q_hi], ``normal`` is beta_hat +/- z sd(beta*).
    """
    if B < 100:
        raise InvalidSampleError("need at least 100 bootstrap resamples")
    if not 0.0 < level < 1.0:
        raise InvalidSampleError(f"level must lie in (0, 1), got {level!r}")
    if convention not in CONVENTIONS:
        raise InvalidSampleError(f"unknown convention {convention!r}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)

    fit = fit_full_model(sample, p)
    beta_hat = fit.beta_hat
    u_pool = fit.u_resid[fit.p:]
    v_pool = fit.v_resid
    size = sample.n - 1
    idx = rng.integers(0, u_pool.shape[0], size=(B, size))
    u_star = np.ascontiguousarray(u_pool[idx])
    v_star = np.ascontiguousarray(v_pool[idx])
    betas = kernels.bootstrap_betas(u_star, v_star, fit.alpha_hat, beta_hat, fit.theta_hat,
                                    fit.phi_hat, fit.b_hat, float(sample.x[0]))
    ok = np.isfinite(betas)
    degenerate = int(B - ok.sum())
    if degenerate == B:
        raise DegenerateSampleError("every bootstrap resample had a constant predictor")
    if degenerate > 0.01 * B:
        warnings.warn(f"{degenerate} of {B} bootstrap resamples were degenerate", RuntimeWarning,
                      stacklevel=2)
    betas = betas[ok]

    if convention == "normal":
        from scipy.stats import norm

        half = float(norm.ppf(1.0 - level / 2.0)) * float(np.std(betas, ddof=1))
        lower, upper = beta_hat - half, beta_hat + half
    else:
        q_lo, q_hi = np.quantile(betas, [level / 2.0, 1.0 - level / 2.0])
        if convention == "percentile":
            lower, upper = float(q_lo), float(q_hi)
        else:
            lower, upper = 2.0 * beta_hat - float(q_hi), 2.0 * beta_hat - float(q_lo)
    reject = not (lower <= beta0 <= upper)
    return BootstrapDecision(reject, beta_hat, lower, upper, int(ok.sum()), degenerate)
