# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the Monte-Carlo cone-indicator sums.

Identical comparisons to the numpy fallback (weylcones._mc_numpy), so the two
backends produce bit-identical results for the same samples.
"""

import numpy as np

BACKEND = "cython"


def gamma_indicator_sum(double[:, ::1] samples, list mats_a, list mats_b,
                        list shifts_b, list signs):
    cdef Py_ssize_t n = samples.shape[0]
    cdef Py_ssize_t dim = samples.shape[1]
    cdef long[::1] total = np.zeros(n, dtype=np.int64)
    cdef double[:, ::1] a
    cdef double[:, ::1] b
    cdef double[::1] shift
    cdef int sign
    cdef Py_ssize_t i, r, k, idx
    cdef double acc
    cdef bint ok
    for idx in range(len(mats_a)):
        a = mats_a[idx]
        b = mats_b[idx]
        shift = shifts_b[idx]
        sign = signs[idx]
        for i in range(n):
            ok = True
            for r in range(a.shape[0]):
                acc = 0.0
                for k in range(dim):
                    acc += a[r, k] * samples[i, k]
                if not acc > 0.0:
                    ok = False
                    break
            if ok:
                for r in range(b.shape[0]):
                    acc = 0.0
                    for k in range(dim):
                        acc += b[r, k] * samples[i, k]
                    if not acc > shift[r]:
                        ok = False
                        break
            if ok:
                total[i] += sign
    cdef long s = 0
    cdef long nz = 0
    for i in range(n):
        s += total[i]
        if total[i] != 0:
            nz += 1
    return s, nz
