import os
import subprocess
import sys

import numpy as np
import pytest

from condent import _backend
from condent.simulation import stream_key, thresholds, zipf_joint

BACKENDS = _backend.available()


@pytest.fixture(scope="module")
def table():
    return thresholds(zipf_joint().probs)


@pytest.mark.parametrize("name", BACKENDS)
def test_kernel_contract(name, table):
    k = _backend.get(name)
    out = k.draw_outcomes(table, stream_key(9, 500), 500)
    assert out.dtype == np.int64 and out.min() >= 0 and out.max() <= 5
    assert np.array_equal(k.draw_counts(table, stream_key(9, 500), 500), np.bincount(out, minlength=6))
    assert np.array_equal(k.count_outcomes(np.array([0, 0, 5]), 6), [2, 0, 0, 0, 0, 1])
    with pytest.raises(ValueError):
        k.count_outcomes(np.array([6]), 6)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
@pytest.mark.parametrize("n", [1, 17, 100000, (1 << 20) + 3])
def test_backends_are_bit_identical(n, table):
    py, cy = _backend.get("python"), _backend.get("cython")
    key = stream_key(2024, n, 3)
    assert np.array_equal(py.draw_outcomes(table, key, n), cy.draw_outcomes(table, key, n))
    assert np.array_equal(py.draw_counts(table, key, n), cy.draw_counts(table, key, n))


def test_env_var_forces_python_backend():
    env = dict(os.environ, CONDENT_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import condent; print(condent.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get("fortran")
