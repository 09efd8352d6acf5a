"""Reference implementations used only by the tests."""
import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog


def _interior_point(z):
    """A strictly positive p with sum p = 1 and p @ z = 0, by maximizing min p (LP)."""
    n = z.size
    # variables (p_1..p_n, t); maximize t subject to p_i >= t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    a_eq = np.vstack([np.append(np.ones(n), 0.0), np.append(z, 0.0)])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=[1.0, 0.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        raise ValueError("zero is not interior to the score hull")
    return res.x[:n]


def primal_statistic(z, tol=1e-15, max_iter=500):
    """-2 log max prod(n p_t) over the simplex with sum p_t z_t = 0.

    Works directly on the weights: an LP gives a feasible interior start and
    damped Newton ascent of sum log p runs in the null space of the two
    equality constraints, so no multiplier equation is ever solved.
    """
    z = np.asarray(z, dtype=float)
    z = z / np.abs(z).max()
    n = z.size
    p = _interior_point(z)
    basis = null_space(np.vstack([np.ones(n), z]))
    f = np.sum(np.log(p))
    for _ in range(max_iter):
        g = basis.T @ (1.0 / p)
        h = basis.T @ (basis / p[:, None] ** 2)
        d = np.linalg.solve(h, g)
        decrement = g @ d
        if decrement <= tol:
            break
        step = basis @ d
        t = 1.0
        while True:
            q = p + t * step
            if np.all(q > 0):
                fq = np.sum(np.log(q))
                if fq >= f + 0.25 * t * decrement:
                    break
            t *= 0.5
            if t < 1e-20:
                return -2.0 * (f + n * np.log(n))
        p, f = q, fq
    return -2.0 * (f + n * np.log(n))
