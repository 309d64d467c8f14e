# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels (SplitMix64 stream + integer inverse CDF)."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

NAME = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline Py_ssize_t _locate(const uint64_t[::1] t, Py_ssize_t m, uint64_t u) noexcept nogil:
    # first index with t[idx] > u, i.e. searchsorted(side="right")
    cdef Py_ssize_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if t[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


def draw_outcomes(thresholds, uint64_t key, Py_ssize_t n):
    cdef const uint64_t[::1] t = np.ascontiguousarray(thresholds, dtype=np.uint64)
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t m = t.shape[0], ell
    cdef uint64_t state = key
    with nogil:
        for ell in range(n):
            state = state + GOLDEN
            o[ell] = _locate(t, m, _mix(state) >> 11)
    return out


def draw_counts(thresholds, uint64_t key, Py_ssize_t n):
    cdef const uint64_t[::1] t = np.ascontiguousarray(thresholds, dtype=np.uint64)
    counts = np.zeros(t.shape[0], dtype=np.int64)
    cdef int64_t[::1] c = counts
    cdef Py_ssize_t m = t.shape[0], ell, idx
    cdef uint64_t state = key
    with nogil:
        for ell in range(n):
            state = state + GOLDEN
            idx = _locate(t, m, _mix(state) >> 11)
            # thresholds end at 2**53, so idx < m always
            c[idx] += 1
    return counts


def count_outcomes(outcomes, Py_ssize_t size):
    cdef const int64_t[::1] o = np.ascontiguousarray(outcomes, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] c = counts
    cdef Py_ssize_t ell, n = o.shape[0]
    cdef int64_t k
    cdef int bad = 0
    with nogil:
        for ell in range(n):
            k = o[ell]
            if k < 0 or k >= size:
                bad = 1
                break
            c[k] += 1
    if bad:
        raise ValueError("outcome out of range")
    return counts
