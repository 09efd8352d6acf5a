"""Pure-Python/numpy implementations of the hot loops.

Same algorithms and signatures as the compiled ``_ckernels`` module; used when
the extension is not built or ``ELPREDICT_PURE_PYTHON=1`` is set.
"""
import math

import numpy as np
from scipy.signal import lfilter

MAX_ITER = 200
DBL_EPS = float(np.finfo(np.float64).eps)

STATUS_OK = 0
STATUS_HULL = 1
STATUS_NOCONV = 2


def _ratio(x, h):
    ax = np.abs(x)
    if h == 2.0:
        return x / np.hypot(1.0, x)
    with np.errstate(divide="ignore", over="ignore"):
        small = x * (1.0 + ax**h) ** (-1.0 / h)
        large = np.copysign((1.0 + ax ** (-h)) ** (-1.0 / h), x)
    return np.where(ax <= 1.0, small, large)


def weighted_scores(xlag, y, beta, h):
    xlag = np.asarray(xlag, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (y - beta * xlag) * _ratio(xlag, float(h))


def solve_dual(z):
    """Return ``(lam, status, iterations)`` for the scalar EL dual."""
    z = np.asarray(z, dtype=np.float64)
    n = z.shape[0]
    if n == 0:
        raise ValueError("scores must be nonempty")
    zmin = float(z.min())
    zmax = float(z.max())
    if zmin == 0.0 and zmax == 0.0:
        return 0.0, STATUS_OK, 0
    if zmin >= 0.0 or zmax <= 0.0:
        return 0.0, STATUS_HULL, 0
    scale = max(abs(zmin), abs(zmax))
    tol = 1e-10 * n * scale
    lo = -1.0 / zmax
    hi = -1.0 / zmin
    lam = 0.0
    for it in range(MAX_ITER):
        d = 1.0 + lam * z
        if np.any(d <= 0.0):
            if lam > 0.0:
                hi = lam
            else:
                lo = lam
            lam = 0.5 * (lo + hi)
            continue
        q = z / d
        g = float(q.sum())
        dg = -float((q * q).sum())
        if abs(g) <= tol:
            return lam, STATUS_OK, it + 1
        if g > 0.0:
            lo = lam
        else:
            hi = lam
        step = lam - g / dg
        if not (lo < step < hi):
            step = 0.5 * (lo + hi)
        if step == lam or hi - lo <= 4.0 * DBL_EPS * max(abs(lo), abs(hi)):
            return lam, STATUS_OK, it + 1
        lam = step
    return lam, STATUS_NOCONV, MAX_ITER


def el_dual(z):
    """Return ``(statistic, lam, status, iterations)``; statistic is inf unless status is 0."""
    z = np.asarray(z, dtype=np.float64)
    lam, status, iters = solve_dual(z)
    if status != STATUS_OK:
        return math.inf, lam, status, iters
    stat = 2.0 * float(np.log1p(lam * z).sum())
    return max(stat, 0.0), lam, status, iters


def ar_filter(v, b):
    """e_t = v_t + sum_i b_i e_{t-i}, pre-sample e taken as zero."""
    v = np.asarray(v, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if b.size == 0:
        return v.copy()
    return lfilter([1.0], np.concatenate(([1.0], -b)), v)


def ar1_levels(e, theta, phi, x0):
    """X_0 = x0, X_t = theta + phi X_{t-1} + e_t; returns length len(e)+1."""
    e = np.asarray(e, dtype=np.float64)
    x = np.empty(e.shape[0] + 1)
    x[0] = x0
    x[1:] = lfilter([1.0], [1.0, -phi], theta + e, zi=[phi * x0])[0]
    return x


def bootstrap_betas(u, v, alpha, beta, theta, phi, b, x0):
    """Regenerate B paths of length N from resampled (U*, V*) and refit beta.

    Row j of ``u``/``v`` holds U*_1..U*_N and V*_1..V*_N. The slope is refit on
    the pairs (X*_{t-1}, Y*_t) for t = 2..N. Degenerate rows come back as NaN.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    e = v if b.size == 0 else lfilter([1.0], np.concatenate(([1.0], -b)), v, axis=1)
    nb, N = u.shape
    x = np.empty((nb, N + 1))
    x[:, 0] = x0
    x[:, 1:] = lfilter([1.0], [1.0, -phi], theta + e, axis=1,
                       zi=np.full((nb, 1), phi * x0))[0]
    y = alpha + beta * x[:, :-1] + u
    xl = x[:, 1:N]
    yy = y[:, 1:]
    with np.errstate(invalid="ignore", over="ignore"):
        xc = xl - xl.mean(axis=1, keepdims=True)
        yc = yy - yy.mean(axis=1, keepdims=True)
        sxx = (xc * xc).sum(axis=1)
        sxy = (xc * yc).sum(axis=1)
        ok = (sxx > 0.0) & np.isfinite(sxx)
        out = np.where(ok, sxy / np.where(ok, sxx, 1.0), np.nan)
    if N < 3:
        out[:] = np.nan
    return out
