# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot decode loop: nearest-point search over a sorted constellation with
ties broken toward the smaller value, plus batched error counting."""

import numpy as np
cimport numpy as cnp


cdef Py_ssize_t _nearest(const double[::1] values, double y) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = values.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if values[mid] < y:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        return 0
    if lo == values.shape[0]:
        return values.shape[0] - 1
    if y - values[lo - 1] <= values[lo] - y:
        return lo - 1
    return lo


def nearest_indices(const double[::1] values, const double[::1] ys):
    """Nearest constellation index for each sample."""
    out = np.empty(ys.shape[0], dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(ys.shape[0]):
            ov[i] = _nearest(values, ys[i])
    return out


def count_decode_errors(const double[::1] values,
                        const long long[::1] sent,
                        const double[::1] noise):
    """Number of trials where nearest-point decoding misses the sent index."""
    cdef Py_ssize_t i, errors = 0
    with nogil:
        for i in range(sent.shape[0]):
            if _nearest(values, values[sent[i]] + noise[i]) != sent[i]:
                errors += 1
    return errors
