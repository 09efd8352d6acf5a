"""Chi-square(1) tail probabilities and quantiles.

With one degree of freedom the regularized upper incomplete gamma reduces to
``erfc(sqrt(x / 2))``, so the survival function is exact to double precision.
"""
import math

from scipy.special import erfcinv, erfinv


def chi_square_sf(x: float) -> float:
    """P(chi2_1 > x). ``inf`` maps to 0."""
    if math.isnan(x):
        raise ValueError("x is NaN")
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return math.erfc(math.sqrt(0.5 * x))


def chi_square_isf(q: float) -> float:
    """Inverse survival function: the x with P(chi2_1 > x) = q."""
    if not 0.0 < q <= 1.0:
        raise ValueError(f"tail probability must lie in (0, 1], got {q!r}")
    if q == 1.0:
        return 0.0
    r = float(erfcinv(q))
    # two Newton polish steps on erfc(r) = q; d/dr erfc(r) = -2/sqrt(pi) exp(-r^2)
    for _ in range(2):
        dens = 2.0 / math.sqrt(math.pi) * math.exp(-r * r)
        if dens == 0.0:
            break
        r += (math.erfc(r) - q) / dens
    return 2.0 * r * r


def chi_square_quantile(p: float) -> float:
    """Lower p-quantile of chi2_1, i.e. the critical value for confidence ``p``."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {p!r}")
    if p < 0.5:
        # small quantiles: invert the lower tail erf(sqrt(x/2)) = p directly
        r = float(erfinv(p))
        for _ in range(2):
            dens = 2.0 / math.sqrt(math.pi) * math.exp(-r * r)
            r -= (math.erf(r) - p) / dens
        return 2.0 * r * r
    return chi_square_isf(1.0 - p)
