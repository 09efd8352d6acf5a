"""Monte Carlo size/power runner.

Replication ``r`` of a run with master seed ``s`` draws its sample from
``make_rng(s, r)`` and its bootstrap resamples from ``make_rng(s, r, 1)``, so
all methods in a cell see the same data, different cells share common random
numbers, and results do not depend on execution order or thread count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .baseline import bootstrap_lse_test
from .chi2 import chi_square_quantile
from .dgp import DgpConfig, gen_sample, make_rng
from .el import (
    DegenerateSampleError,
    InterceptMode,
    InvalidSampleError,
    RegressionSample,
    SolverError,
    WeightSpec,
    _el_from_scores,
    weighted_scores,
)

# (sample, rng for auxiliary randomness) -> reject?
Method = Callable[[RegressionSample, np.random.Generator], bool]
MethodSpec = Union[str, Method]

METHOD_NAMES = ("EL1", "EL2", "NA")
# failures that are tallied as anomalies instead of aborting the run
ANOMALIES = (SolverError, DegenerateSampleError, FloatingPointError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class ExperimentReport:
    a: float
    phi: float
    nu: float
    b1: float
    n: int
    method: str
    level: float
    replications: int
    rejections: int
    anomalies: int
    frequency: float
    se: float

    def to_dict(self) -> dict:
        return asdict(self)


TSV_COLUMNS = ("a", "phi", "nu", "b1", "n", "method", "level", "replications", "rejections",
               "frequency", "se", "anomalies")


def _el_method(mode: InterceptMode, level: float, weight: WeightSpec, beta0: float) -> Method:
    crit = chi_square_quantile(1.0 - level)

    def run(sample: RegressionSample, rng: np.random.Generator) -> bool:
        res = _el_from_scores(weighted_scores(sample, beta0, weight, mode), mode)
        return res.statistic > crit

    return run


def _na_method(level: float, beta0: float, resamples: int, p: int, convention: str) -> Method:
    def run(sample: RegressionSample, rng: np.random.Generator) -> bool:
        return bootstrap_lse_test(sample, beta0, p=p, level=level, B=resamples, rng=rng,
                                  convention=convention).reject

    return run


def build_method(name: str, level: float, weight: WeightSpec = WeightSpec(), beta0: float = 0.0,
                 bootstrap_resamples: int = 1000, bootstrap_p: int = 1,
                 bootstrap_convention: str = "basic") -> Method:
    """Named test at size ``level``: EL1 (known intercept), EL2 (unknown), NA (bootstrap LSE)."""
    key = name.upper()
    if key == "EL1":
        return _el_method(InterceptMode.KNOWN, level, weight, beta0)
    if key == "EL2":
        return _el_method(InterceptMode.UNKNOWN, level, weight, beta0)
    if key == "NA":
        return _na_method(level, beta0, bootstrap_resamples, bootstrap_p, bootstrap_convention)
    raise InvalidSampleError(f"unknown method {name!r}; choose from {', '.join(METHOD_NAMES)}")


def _one_replication(config: DgpConfig, r: int, methods: Sequence[Method]) -> list[int]:
    # 1 = reject, 0 = accept, -1 = anomaly
    sample = gen_sample(config, make_rng(config.seed, r))
    aux_seed = make_rng(config.seed, r, 1)
    out = []
    for m in methods:
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                out.append(1 if m(sample, aux_seed) else 0)
        except ANOMALIES:
            out.append(-1)
    return out


def run_experiment(config: DgpConfig, methods: Sequence[MethodSpec] = ("EL1", "EL2"),
                   level: float = 0.10, replications: int = 10_000, threads: int = 1,
                   weight: WeightSpec = WeightSpec(), bootstrap_resamples: int = 1000,
                   bootstrap_p: int = 1, bootstrap_convention: str = "basic") -> list[ExperimentReport]:
    """Rejection frequencies of H0: beta = 0 at size ``level`` for one grid cell.

    Methods are names from ``METHOD_NAMES`` or callables ``(sample, rng) -> bool``.
    Returns one report per method, in the given order.
    """
    if replications < 100:
        raise InvalidSampleError(f"need at least 100 replications, got {replications}")
    if not 0.0 < level < 1.0:
        raise InvalidSampleError(f"level must lie in (0, 1), got {level!r}")
    names, fns = [], []
    for m in methods:
        if isinstance(m, str):
            names.append(m.upper())
            fns.append(build_method(m, level, weight, 0.0, bootstrap_resamples, bootstrap_p,
                                    bootstrap_convention))
        else:
            names.append(getattr(m, "__name__", "custom"))
            fns.append(m)

    if threads <= 1:
        rows = [_one_replication(config, r, fns) for r in range(replications)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda r: _one_replication(config, r, fns), range(replications)))
    table = np.asarray(rows, dtype=np.int64).reshape(replications, len(fns))

    reports = []
    for j, name in enumerate(names):
        col = table[:, j]
        anomalies = int((col < 0).sum())
        valid = replications - anomalies
        rejections = int((col > 0).sum())
        freq = rejections / valid if valid else math.nan
        se = math.sqrt(freq * (1.0 - freq) / valid) if valid else math.nan
        reports.append(ExperimentReport(config.a, config.phi, config.nu, config.b1, int(config.n),
                                        name, level, replications, rejections, anomalies, freq, se))
    return reports
