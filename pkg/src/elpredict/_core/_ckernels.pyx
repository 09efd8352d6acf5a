# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Must stay numerically interchangeable with ``_pykernels``; both are exercised
against each other in ``tests/test_kernels.py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log1p, pow, hypot, copysign, isfinite, NAN

cnp.import_array()

cdef int MAX_ITER = 200
cdef double DBL_EPS = 2.220446049250313e-16

# solver status codes, mirrored in _pykernels
STATUS_OK = 0
STATUS_HULL = 1
STATUS_NOCONV = 2


cdef inline double _ratio(double x, double h) noexcept nogil:
    # x / (1 + |x|^h)^(1/h), arranged so large |x| never overflows
    cdef double ax = fabs(x)
    if h == 2.0:
        return x / hypot(1.0, x)
    if ax <= 1.0:
        return x * pow(1.0 + pow(ax, h), -1.0 / h)
    return copysign(pow(1.0 + pow(ax, -h), -1.0 / h), x)


def weighted_scores(const double[::1] xlag, const double[::1] y, double beta, double h):
    cdef Py_ssize_t n = y.shape[0], t
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] z = out
    with nogil:
        for t in range(n):
            z[t] = (y[t] - beta * xlag[t]) * _ratio(xlag[t], h)
    return out


cdef int _solve(const double[::1] z, double* lam_out, int* iters_out) noexcept nogil:
    cdef Py_ssize_t n = z.shape[0], t
    cdef double zmin = z[0], zmax = z[0], scale, tol, lo, hi, lam, g, dg, d, step
    cdef bint inside
    cdef int it
    for t in range(1, n):
        if z[t] < zmin:
            zmin = z[t]
        if z[t] > zmax:
            zmax = z[t]
    lam_out[0] = 0.0
    iters_out[0] = 0
    if zmin == 0.0 and zmax == 0.0:
        return 0
    if zmin >= 0.0 or zmax <= 0.0:
        return 1
    scale = fabs(zmin) if fabs(zmin) > fabs(zmax) else fabs(zmax)
    tol = 1e-10 * n * scale
    lo = -1.0 / zmax
    hi = -1.0 / zmin
    lam = 0.0
    for it in range(MAX_ITER):
        iters_out[0] = it + 1
        g = 0.0
        dg = 0.0
        inside = True
        for t in range(n):
            d = 1.0 + lam * z[t]
            if d <= 0.0:
                inside = False
                break
            g += z[t] / d
            dg -= (z[t] / d) * (z[t] / d)
        if not inside:
            # rounding pushed lam onto the boundary; pull toward the side we came from
            if lam > 0.0:
                hi = lam
            else:
                lo = lam
            lam = 0.5 * (lo + hi)
            continue
        if fabs(g) <= tol:
            lam_out[0] = lam
            return 0
        if g > 0.0:
            lo = lam
        else:
            hi = lam
        step = lam - g / dg
        if not (step > lo and step < hi):
            step = 0.5 * (lo + hi)
        if step == lam or hi - lo <= 4.0 * DBL_EPS * (fabs(lo) if fabs(lo) > fabs(hi) else fabs(hi)):
            lam_out[0] = lam
            return 0
        lam = step
    lam_out[0] = lam
    return 2


def solve_dual(const double[::1] z):
    """Return ``(lam, status, iterations)`` for the scalar EL dual."""
    cdef double lam
    cdef int iters, status
    if z.shape[0] == 0:
        raise ValueError("scores must be nonempty")
    with nogil:
        status = _solve(z, &lam, &iters)
    return lam, status, iters


def el_dual(const double[::1] z):
    """Return ``(statistic, lam, status, iterations)``; statistic is inf unless status is 0."""
    cdef double lam, stat = 0.0
    cdef int iters, status
    cdef Py_ssize_t t
    if z.shape[0] == 0:
        raise ValueError("scores must be nonempty")
    with nogil:
        status = _solve(z, &lam, &iters)
        if status == 0:
            for t in range(z.shape[0]):
                stat += log1p(lam * z[t])
            stat *= 2.0
            if stat < 0.0:
                stat = 0.0
    if status != 0:
        return float("inf"), lam, status, iters
    return stat, lam, status, iters


def ar_filter(const double[::1] v, const double[::1] b):
    """e_t = v_t + sum_i b_i e_{t-i}, pre-sample e taken as zero."""
    cdef Py_ssize_t n = v.shape[0], p = b.shape[0], t, i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] e = out
    cdef double acc
    with nogil:
        for t in range(n):
            acc = v[t]
            for i in range(p):
                if t - 1 - i >= 0:
                    acc += b[i] * e[t - 1 - i]
            e[t] = acc
    return out


def ar1_levels(const double[::1] e, double theta, double phi, double x0):
    """X_0 = x0, X_t = theta + phi X_{t-1} + e_t; returns length len(e)+1."""
    cdef Py_ssize_t n = e.shape[0], t
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] x = out
    with nogil:
        x[0] = x0
        for t in range(n):
            x[t + 1] = theta + phi * x[t] + e[t]
    return out


def bootstrap_betas(const double[:, ::1] u, const double[:, ::1] v,
                    double alpha, double beta, double theta, double phi,
                    const double[::1] b, double x0):
    """Regenerate B paths of length N from resampled (U*, V*) and refit beta.

    Row j of ``u``/``v`` holds U*_1..U*_N and V*_1..V*_N. The slope is refit on
    the pairs (X*_{t-1}, Y*_t) for t = 2..N. Degenerate rows come back as NaN.
    """
    cdef Py_ssize_t nb = u.shape[0], N = u.shape[1], p = b.shape[0]
    cdef Py_ssize_t j, t, i, k
    out = np.empty(nb, dtype=np.float64)
    cdef double[::1] res = out
    work = np.empty(N, dtype=np.float64)
    cdef double[::1] e = work
    cdef double xprev, xcur, ycur, acc, mx, my, sxx, sxy, dx, delta
    with nogil:
        for j in range(nb):
            xprev = x0
            mx = 0.0
            my = 0.0
            sxx = 0.0
            sxy = 0.0
            k = 0
            for t in range(N):
                acc = v[j, t]
                for i in range(p):
                    if t - 1 - i >= 0:
                        acc += b[i] * e[t - 1 - i]
                e[t] = acc
                ycur = alpha + beta * xprev + u[j, t]
                xcur = theta + phi * xprev + acc
                if t >= 1:
                    # Welford update on (X*_{t-1}, Y*_t)
                    k += 1
                    dx = xprev - mx
                    mx += dx / k
                    delta = ycur - my
                    my += delta / k
                    sxx += dx * (xprev - mx)
                    sxy += dx * (ycur - my)
                xprev = xcur
            if k >= 2 and sxx > 0.0 and isfinite(sxx):
                res[j] = sxy / sxx
            else:
                res[j] = NAN
    return out
