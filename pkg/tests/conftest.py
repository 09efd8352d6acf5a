from pathlib import Path

import numpy as np
import pytest

from elpredict import DgpConfig, RegressionSample, gen_sample

DATA = Path(__file__).parent / "data"

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, name, ok, detail):
        tag = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        ACCEPTANCE_LINES.append(f"[{tag}] {number:>2}. {name}: {detail}")
        return ok

    return record


@pytest.fixture
def fixture_csv():
    return DATA / "dgp_n120_seed7.csv"


@pytest.fixture
def small_sample():
    x = np.array([0.5, 1.2, -0.3, 0.8, 2.0])
    y = np.array([1.0, -0.5, 0.7, 1.5])
    return RegressionSample(x, y)


@pytest.fixture
def dgp_sample():
    return gen_sample(DgpConfig(n=100, phi=0.99, nu=4, seed=11))
