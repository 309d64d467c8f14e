import math

import numpy as np
import pytest
from hypothesis import strategies as st

from condent import JointPmf, validate, zipf_joint

ZIPF_WEIGHTS = (3600, 900, 400, 225, 144, 100)


@pytest.fixture
def zipf() -> JointPmf:
    return zipf_joint(2.0, 3, 2)


@pytest.fixture
def uniform22() -> JointPmf:
    return validate([0.25] * 4, 2, 2)


def random_strict_pmf(rng: np.random.Generator, r: int, s: int) -> JointPmf:
    w = rng.uniform(0.05, 1.0, size=r * s)
    w /= w.sum()
    return validate(w, r, s)


@st.composite
def strict_pmfs(draw, min_dim=2, max_dim=6):
    r = draw(st.integers(min_dim, max_dim))
    s = draw(st.integers(min_dim, max_dim))
    w = draw(st.lists(st.floats(0.01, 1.0), min_size=r * s, max_size=r * s))
    p = np.array(w) / np.sum(w)
    return validate(p, r, s)


# Independent oracles: plain loops over (i, j) pairs, no package code.

def oracle_table(pmf):
    return [[float(pmf.probs[pmf.s * i + j]) for j in range(pmf.s)] for i in range(pmf.r)]


def oracle_conditional_shannon(table, given="X"):
    r, s = len(table), len(table[0])
    if given == "X":
        m = [sum(table[i]) for i in range(r)]
        return sum(table[i][j] * math.log(m[i] / table[i][j]) for i in range(r) for j in range(s) if table[i][j] > 0)
    m = [sum(table[i][j] for i in range(r)) for j in range(s)]
    return sum(table[i][j] * math.log(m[j] / table[i][j]) for i in range(r) for j in range(s) if table[i][j] > 0)


def oracle_power_ratio(table, alpha, given="X"):
    r, s = len(table), len(table[0])
    joint = sum(table[i][j] ** alpha for i in range(r) for j in range(s) if table[i][j] > 0)
    if given == "X":
        m = [sum(table[i]) for i in range(r)]
    else:
        m = [sum(table[i][j] for i in range(r)) for j in range(s)]
    return joint / sum(x ** alpha for x in m if x > 0)


# acceptance criteria append "PASS/FAIL criterion N: detail" lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
