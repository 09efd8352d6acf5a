"""Weighted empirical likelihood for the slope of a predictive regression.

The estimating function is the weighted score

    z_t(beta) = (Y_t - beta X_{t-1}) X_{t-1} / w(X_{t-1}),   w(t) = (1 + |t|^h)^(1/h),

and the log EL ratio is ``2 sum log(1 + lam z_t)`` with ``lam`` the root of the
scalar dual ``sum z_t / (1 + lam z_t) = 0``. With an unknown intercept the
sample is first split in half and differenced at lag ``m = n // 2``, which
removes the intercept exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._core import STATUS_HULL, STATUS_NOCONV, kernels
from .chi2 import chi_square_quantile, chi_square_sf

SCAN_POINTS = 512
ENDPOINT_TOL = 1e-8


class InvalidSampleError(ValueError):
    """Input violates the sample or parameter preconditions."""


class DegenerateSampleError(ValueError):
    """No confidence set can be formed from the sample."""


class SolverError(RuntimeError):
    """The dual root-finder ran out of iterations."""


class InterceptMode(str, enum.Enum):
    KNOWN = "known"
    UNKNOWN = "unknown"


def _as_mode(mode) -> InterceptMode:
    try:
        return InterceptMode(mode)
    except ValueError:
        raise InvalidSampleError(f"unknown intercept mode {mode!r}") from None


@dataclass(frozen=True)
class RegressionSample:
    """Paired series: ``x`` holds X_0..X_n and ``y`` holds Y_1..Y_n."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64, copy=True).ravel()
        y = np.array(self.y, dtype=np.float64, copy=True).ravel()
        if x.shape[0] != y.shape[0] + 1:
            raise InvalidSampleError(
                f"len(x) must equal len(y) + 1, got {x.shape[0]} and {y.shape[0]}"
            )
        if y.shape[0] < 2:
            raise InvalidSampleError("need at least two observations")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidSampleError("sample contains NaN or infinite values")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def xlag(self) -> np.ndarray:
        """X_0..X_{n-1}, aligned with ``y``."""
        return self.x[:-1]


@dataclass(frozen=True)
class WeightSpec:
    """Weight family ``w(t) = (1 + |t|^h)^(1/h)``; ``h = 2`` gives sqrt(1 + t^2)."""

    h: float = 2.0

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise InvalidSampleError(f"weight exponent h must be positive, got {self.h!r}")

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=np.float64))
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return np.where(t > 1.0, t * (1.0 + t ** (-self.h)) ** (1.0 / self.h),
                            (1.0 + t**self.h) ** (1.0 / self.h))


@dataclass(frozen=True)
class ElResult:
    statistic: float
    lam: float
    hull_ok: bool
    p_value: float
    mode: InterceptMode
    iterations: int = 0


@dataclass(frozen=True)
class TestDecision:
    reject: bool
    statistic: float
    p_value: float
    critical_value: float
    level: float

    __test__ = False  # keep pytest from collecting this class


@dataclass(frozen=True)
class ConfidenceSet:
    level: float
    lower: float
    upper: float
    disconnected: bool
    estimate: float
    mode: InterceptMode = field(default=InterceptMode.UNKNOWN)


def design(sample: RegressionSample, mode=InterceptMode.KNOWN) -> tuple[np.ndarray, np.ndarray]:
    """Regressor/response pairs the scores are built from.

    Known intercept: ``(X_{t-1}, Y_t)`` for t = 1..n. Unknown intercept:
    ``(X_{t-1} - X_{t-1+m}, Y_t - Y_{t+m})`` for t = 1..m, m = n // 2; with odd
    ``n`` the last observation is unused.
    """
    mode = _as_mode(mode)
    if mode is InterceptMode.KNOWN:
        return np.ascontiguousarray(sample.xlag), np.ascontiguousarray(sample.y)
    n = sample.n
    if n < 4:
        raise InvalidSampleError("unknown-intercept mode needs n >= 4")
    m = n // 2
    xt = sample.x[:m] - sample.x[m:2 * m]
    yt = sample.y[:m] - sample.y[m:2 * m]
    return xt, yt


def weighted_scores(sample: RegressionSample, beta: float, weight: WeightSpec = WeightSpec(),
                    mode=InterceptMode.KNOWN) -> np.ndarray:
    if not math.isfinite(beta):
        raise InvalidSampleError("beta must be finite")
    xl, y = design(sample, mode)
    return kernels.weighted_scores(xl, y, float(beta), float(weight.h))


def solve_lagrange(scores) -> tuple[float, bool]:
    """Root of ``sum z / (1 + lam z) = 0``.

    Returns ``(lam, hull_ok)``. ``hull_ok`` is False when zero is not strictly
    inside the convex hull of the scores, in which case ``lam`` is meaningless.
    """
    z = np.ascontiguousarray(scores, dtype=np.float64)
    if z.size == 0:
        raise InvalidSampleError("scores must be nonempty")
    lam, status, _ = kernels.solve_dual(z)
    if status == STATUS_NOCONV:
        raise SolverError("Lagrange dual did not converge")
    if status == STATUS_HULL:
        return math.nan, False
    return lam, True


def _el_from_scores(z: np.ndarray, mode: InterceptMode) -> ElResult:
    stat, lam, status, iters = kernels.el_dual(z)
    if status == STATUS_NOCONV:
        raise SolverError(f"Lagrange dual did not converge in {iters} iterations")
    if status == STATUS_HULL:
        return ElResult(math.inf, math.nan, False, 0.0, mode, iters)
    return ElResult(stat, lam, True, chi_square_sf(stat), mode, iters)


def log_el_ratio(sample: RegressionSample, beta: float, weight: WeightSpec = WeightSpec(),
                 mode=InterceptMode.KNOWN) -> ElResult:
    """-2 log EL ratio at ``beta``; +inf (p = 0) when the hull condition fails."""
    mode = _as_mode(mode)
    return _el_from_scores(weighted_scores(sample, beta, weight, mode), mode)


def el_test(sample: RegressionSample, beta0: float, level: float = 0.90,
            weight: WeightSpec = WeightSpec(), mode=InterceptMode.KNOWN) -> TestDecision:
    """Test beta = beta0; ``level`` is the confidence level b (reject above chi2_{1,b})."""
    if not 0.0 < level < 1.0:
        raise InvalidSampleError(f"level must lie in (0, 1), got {level!r}")
    res = log_el_ratio(sample, beta0, weight, mode)
    crit = chi_square_quantile(level)
    return TestDecision(res.statistic > crit, res.statistic, res.p_value, crit, level)


def score_root(sample: RegressionSample, weight: WeightSpec = WeightSpec(),
               mode=InterceptMode.KNOWN) -> float:
    """The beta solving ``sum z_t(beta) = 0``; the EL statistic is zero there."""
    xl, y = design(sample, mode)
    r = _x_over_w(xl, weight.h)
    denom = float(np.dot(xl, r))
    if not denom > 0.0:
        raise DegenerateSampleError("every regressor is zero; the slope is unidentified")
    return float(np.dot(y, r)) / denom


def _x_over_w(xl: np.ndarray, h: float) -> np.ndarray:
    # scores at beta = 0 with unit responses are exactly X / w(X)
    return kernels.weighted_scores(xl, np.ones_like(xl), 0.0, float(h))


class _Profile:
    """l(beta) for a fixed design."""

    def __init__(self, xl, y, h, mode):
        self.xl, self.y, self.h, self.mode = xl, y, h, mode

    def __call__(self, beta: float) -> float:
        z = kernels.weighted_scores(self.xl, self.y, float(beta), self.h)
        stat, _, status, _ = kernels.el_dual(z)
        if status == STATUS_NOCONV:
            raise SolverError(f"Lagrange dual did not converge at beta={beta!r}")
        return stat


def _endpoint(prof: _Profile, inner: float, outer: float, q: float) -> float:
    """Crossing of l = q between ``inner`` (l < q) and ``outer`` (l > q, maybe inf)."""
    l_out = prof(outer)
    for _ in range(400):
        if math.isfinite(l_out):
            break
        mid = 0.5 * (inner + outer)
        if mid == inner or mid == outer:
            return inner
        l_mid = prof(mid)
        if l_mid > q:
            outer, l_out = mid, l_mid
        else:
            inner = mid
    if not math.isfinite(l_out):
        return inner
    root = brentq(lambda b: prof(b) - q, inner, outer, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                  maxiter=500)
    return float(root)


def _expand(prof: _Profile, center: float, step: float, direction: float, q: float) -> tuple[float, float]:
    inner = center
    for _ in range(2000):
        outer = center + direction * step
        if prof(outer) > q:
            return inner, outer
        inner = outer
        step *= 2.0
    raise DegenerateSampleError("EL statistic stays below the critical value; set is unbounded")


def confidence_set(sample: RegressionSample, level: float = 0.90, weight: WeightSpec = WeightSpec(),
                   mode=InterceptMode.UNKNOWN) -> ConfidenceSet:
    """EL confidence set ``{beta : l(beta) <= chi2_{1,level}}``.

    The statistic is zero at the weighted-score root; each endpoint is found by
    doubling outward until the critical value is crossed, then root-finding.
    A 512-point scan over ``[lower - width, upper + width]`` flags sets that are
    not a single interval.
    """
    if not 0.0 < level < 1.0:
        raise InvalidSampleError(f"level must lie in (0, 1), got {level!r}")
    mode = _as_mode(mode)
    xl, y = design(sample, mode)
    prof = _Profile(xl, y, float(weight.h), mode)
    q = chi_square_quantile(level)
    center = score_root(sample, weight, mode)
    if not prof(center) <= q:
        raise DegenerateSampleError("no beta with a finite EL statistic was found")

    r = _x_over_w(xl, weight.h)
    resid = kernels.weighted_scores(xl, y, center, float(weight.h))
    denom = float(np.dot(xl, r))
    # normal-theory half-width as a starting step; guarded for exact fits
    step = math.sqrt(q * float(np.dot(resid, resid))) / denom
    step = max(step, 1e-12 * max(1.0, abs(center)))

    lo_in, lo_out = _expand(prof, center, step, -1.0, q)
    hi_in, hi_out = _expand(prof, center, step, 1.0, q)
    lower = _endpoint(prof, lo_in, lo_out, q)
    upper = _endpoint(prof, hi_in, hi_out, q)

    disconnected = False
    width = upper - lower
    if width > 0:
        grid = np.linspace(lower - width, upper + width, SCAN_POINTS)
        for b in grid:
            stat = prof(b)
            if lower < b < upper:
                if stat > q:
                    disconnected = True
                    break
            elif b < lower or b > upper:
                if stat <= q:
                    disconnected = True
                    break
    return ConfidenceSet(level, lower, upper, disconnected, center, mode)
