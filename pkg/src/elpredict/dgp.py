"""Synthetic predictive-regression samples.

    Y_t = alpha + (a / sqrt(n)) X_{t-1} + U_t
    X_t = theta + phi X_{t-1} + e_t,     e_t = V_t + sum_i b_i e_{t-i}
    V_t = delta U_t + c(nu) eps_t,       U_t ~ N(0, 1), eps_t ~ t(nu)

with ``c(nu) = sqrt(1 - delta^2) / sqrt(nu / (nu - 2))`` when nu > 2 (so V has
unit variance) and ``c(nu) = 1`` otherwise.

Random streams: every generator is ``numpy.random.Generator(PCG64(SeedSequence(key)))``
with ``key = [seed, replication, ...]``. Results are reproducible per seed
contract, not across other implementations' bit streams.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._core import kernels
from .el import InvalidSampleError, RegressionSample

BURN_IN = 500
_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator keyed by ``(seed, *keys)``; distinct keys give independent streams."""
    entropy = [int(seed) & _SEED_MASK] + [int(k) & _SEED_MASK for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class DgpConfig:
    n: int = 100
    a: float = 0.0
    alpha: float = 0.0
    theta: float = 0.0
    phi: float = 1.0
    b: tuple[float, ...] = field(default_factory=tuple)
    nu: float = 4.0
    delta: float = -0.75
    x0: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if int(self.n) != self.n or self.n < 4:
            raise InvalidSampleError(f"n must be an integer >= 4, got {self.n!r}")
        if not self.nu > 0:
            raise InvalidSampleError(f"nu must be positive, got {self.nu!r}")
        if not -1.0 <= self.delta <= 1.0:
            raise InvalidSampleError(f"delta must lie in [-1, 1], got {self.delta!r}")
        if self.b:
            # characteristic roots of z^p - b_1 z^{p-1} - ... - b_p
            roots = np.roots(np.concatenate(([1.0], -np.asarray(self.b))))
            if np.any(np.abs(roots) >= 1.0):
                raise InvalidSampleError(f"AR error polynomial with b={self.b} is not stable")

    @property
    def beta(self) -> float:
        return self.a / math.sqrt(self.n)

    @property
    def b1(self) -> float:
        return self.b[0] if self.b else 0.0

    def with_seed(self, seed: int) -> "DgpConfig":
        return replace(self, seed=seed)


def gen_student_t(nu: float, rng: np.random.Generator, size=None):
    """Student-t(nu) via N(0,1) / sqrt(Gamma(nu/2, scale 2/nu)); valid for any nu > 0."""
    if not nu > 0:
        raise InvalidSampleError(f"nu must be positive, got {nu!r}")
    z = rng.standard_normal(size)
    g = rng.standard_gamma(0.5 * nu, size) / (0.5 * nu)
    return z / np.sqrt(g)


def innovation_scale(nu: float, delta: float) -> float:
    if nu > 2:
        return math.sqrt(1.0 - delta * delta) / math.sqrt(nu / (nu - 2.0))
    return 1.0


def gen_innovation_pair(config: DgpConfig, rng: np.random.Generator, size=None):
    """Draw ``(U, V)``; arrays when ``size`` is given."""
    u = rng.standard_normal(size)
    eps = gen_student_t(config.nu, rng, size)
    v = config.delta * u + innovation_scale(config.nu, config.delta) * eps
    return u, v


def gen_sample(config: DgpConfig, rng: np.random.Generator | None = None) -> RegressionSample:
    """One sample of length ``config.n``; seeded from ``config.seed`` unless ``rng`` is given.

    The AR error recursion runs ``BURN_IN`` steps before e_1 is emitted.
    """
    if rng is None:
        rng = make_rng(config.seed)
    n = int(config.n)
    u, v = gen_innovation_pair(config, rng, BURN_IN + n)
    e = kernels.ar_filter(v, np.asarray(config.b, dtype=np.float64))[BURN_IN:]
    x = kernels.ar1_levels(e, config.theta, config.phi, config.x0)
    y = config.alpha + config.beta * x[:-1] + u[BURN_IN:]
    return RegressionSample(x, y)
