"""Compare the compiled and numpy kernel backends.

Run from the repository root after building the extension::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row times one workload under both backends and reports the speedup.
"""
from __future__ import annotations

import argparse
import contextlib
import timeit

import numpy as np

from elpredict import DgpConfig, confidence_set, gen_sample, make_rng, run_experiment
from elpredict import baseline, dgp, el
from elpredict._core import _pykernels

try:
    from elpredict._core import _ckernels
except ImportError:  # extension not built
    _ckernels = None


@contextlib.contextmanager
def backend(mod):
    saved = [(m, m.kernels) for m in (el, dgp, baseline)]
    for m, _ in saved:
        m.kernels = mod
    try:
        yield
    finally:
        for m, k in saved:
            m.kernels = k


def workloads():
    s = gen_sample(DgpConfig(n=300, phi=1.0, nu=1.5, seed=1))
    rng = make_rng(2)
    z = rng.standard_normal(300) + 0.05
    u = rng.standard_normal((500, 299))
    v = rng.standard_normal((500, 299))
    cfg = DgpConfig(n=300, phi=1.0, nu=4.0, seed=3)
    small = DgpConfig(n=100, phi=0.9, nu=4.0, seed=4)
    return {
        "el_dual n=300": lambda k: k.el_dual(z),
        "weighted_scores n=300": lambda k: k.weighted_scores(s.xlag, s.y, 0.1, 2.0),
        "bootstrap_betas B=500 n=300": lambda k: k.bootstrap_betas(u, v, 0.0, 0.0, 0.0, 1.0,
                                                                    np.array([-0.5]), 0.0),
        "gen_sample n=300": lambda k: gen_sample(cfg),
        "confidence_set n=300": lambda k: confidence_set(s, 0.90),
        "EL1+EL2 R=200 n=300": lambda k: run_experiment(cfg, ("EL1", "EL2"), replications=200),
        "NA R=100 B=200 n=100": lambda k: run_experiment(small, ("NA",), replications=100,
                                                         bootstrap_resamples=200),
    }


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    mods = [("python", _pykernels)]
    if _ckernels is not None:
        mods.append(("cython", _ckernels))
    else:
        print("compiled extension not available; timing the numpy backend only")

    print(f"{'workload':32s}" + "".join(f"{name:>14s}" for name, _ in mods) + "     speedup")
    for label, work in workloads().items():
        times = []
        for _, mod in mods:
            with backend(mod):
                times.append(best_of(lambda: work(mod), args.repeat))
        row = f"{label:32s}" + "".join(f"{t * 1e3:11.3f} ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
