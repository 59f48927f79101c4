from fractions import Fraction

import numpy as np
import pytest

from fairaudit.core import Dataset
from fairaudit.scenarios import TABLE1_ROWS, table1_fixture

ACCEPTANCE_LINES = []


@pytest.fixture
def table1():
    return table1_fixture()


@pytest.fixture
def table1_fractions():
    """Table 1 columns as exact rationals, for hand-arithmetic oracles."""
    x = [Fraction(r[0]) for r in TABLE1_ROWS]
    s = [Fraction(r[1]) for r in TABLE1_ROWS]
    y = [Fraction(r[2]) for r in TABLE1_ROWS]
    return x, s, y


def random_dataset(rng, n=50, k=2, beta=-3.0, noise=0.5, binary=True):
    X = rng.normal(size=(n, k)) * rng.uniform(0.5, 5, size=k) + rng.uniform(-10, 10, size=k)
    if binary:
        p = 1 / (1 + np.exp(-(X[:, 0] - X[:, 0].mean())))
        s = (rng.uniform(size=n) < p).astype(float)
        s[0], s[1] = 0.0, 1.0
    else:
        s = 0.3 * X[:, 0] + rng.normal(size=n)
    coef = rng.uniform(-5, 5, size=k)
    y = 2.0 + X @ coef + beta * s + noise * rng.normal(size=n)
    return Dataset(X, s, y, tuple(f"x{j}" for j in range(k)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
