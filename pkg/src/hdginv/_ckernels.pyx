# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled subset-convolution matrix product."""

import numpy as np


def subset_matmul(const double[:, :, ::1] x, const double[:, :, ::1] y):
    """Return ``out[s] = sum(x[t] @ y[s ^ t] for t subset of s)``."""
    cdef Py_ssize_t k = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t m = x.shape[2]
    cdef Py_ssize_t p = y.shape[2]
    if y.shape[0] != k or y.shape[1] != m:
        raise ValueError("non-conformable component stacks")
    out = np.zeros((k, n, p))
    cdef double[:, :, ::1] o = out
    cdef Py_ssize_t s, t, u, i, j, l
    cdef double xv
    with nogil:
        for s in range(k):
            t = s
            while True:
                u = s ^ t
                for i in range(n):
                    for l in range(m):
                        xv = x[t, i, l]
                        if xv != 0.0:
                            for j in range(p):
                                o[s, i, j] += xv * y[u, l, j]
                if t == 0:
                    break
                t = (t - 1) & s
    return out
