"""Numpy implementation of the sampling kernels.

Bit-identical to ``_ckernels``: both walk the same SplitMix64 stream and
locate each 53-bit draw among the same integer thresholds.
"""

import numpy as np

NAME = "python"

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _draws(key, start, stop):
    ell = np.arange(start + 1, stop + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = np.uint64(key) + ell * GOLDEN
        return _mix(state) >> np.uint64(11)


def draw_outcomes(thresholds, key, n):
    """Return ``n`` zero-based cell indices drawn from the stream ``key``."""
    thresholds = np.ascontiguousarray(thresholds, dtype=np.uint64)
    out = np.empty(n, dtype=np.int64)
    for start in range(0, n, _CHUNK):
        stop = min(n, start + _CHUNK)
        out[start:stop] = np.searchsorted(thresholds, _draws(key, start, stop), side="right")
    return out


def draw_counts(thresholds, key, n):
    """Like ``draw_outcomes`` but only returns per-cell counts."""
    thresholds = np.ascontiguousarray(thresholds, dtype=np.uint64)
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for start in range(0, n, _CHUNK):
        stop = min(n, start + _CHUNK)
        idx = np.searchsorted(thresholds, _draws(key, start, stop), side="right")
        counts += np.bincount(idx, minlength=len(thresholds))
    return counts


def count_outcomes(outcomes, size):
    """Histogram of zero-based outcomes; raises on out-of-range values."""
    outcomes = np.asarray(outcomes, dtype=np.int64)
    if outcomes.size and (outcomes.min() < 0 or outcomes.max() >= size):
        raise ValueError("outcome out of range")
    return np.bincount(outcomes, minlength=size).astype(np.int64)
