# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel evaluation: fused distance + radial profile loops.

Same contract as ``_corepy``; selected at import time by ``backend``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, pow, sqrt

cnp.import_array()

DEF ASKEY = 0
DEF WENDLAND13 = 1
DEF WENDLAND33 = 2
DEF GAUSSIAN = 3


cdef inline double _profile(int family, double p0, double r) noexcept nogil:
    cdef double u, u2, u4, poly
    if family == GAUSSIAN:
        return exp(-p0 * r * r)
    if r >= 1.0:
        return 0.0
    u = 1.0 - r
    if family == ASKEY:
        return pow(u, p0)
    u2 = u * u
    u4 = u2 * u2
    if family == WENDLAND13:
        poly = ((315.0 * r + 285.0) * r + 105.0) * r + 15.0
        return u4 * u2 * u * poly
    # WENDLAND33
    poly = ((32.0 * r + 25.0) * r + 8.0) * r + 1.0
    return u4 * u4 * poly


def cross_gram(int family, double p0, double shape, X, Y):
    """Kernel cross matrix ``(k(x_i, y_j))`` for one component kernel."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], m = Yv.shape[0], d = Xv.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j, k
    cdef double r, diff, acc
    with nogil:
        if d == 1:
            for i in range(n):
                for j in range(m):
                    r = fabs(Xv[i, 0] - Yv[j, 0])
                    ov[i, j] = _profile(family, p0, shape * r)
        else:
            for i in range(n):
                for j in range(m):
                    acc = 0.0
                    for k in range(d):
                        diff = Xv[i, k] - Yv[j, k]
                        acc += diff * diff
                    r = sqrt(acc)
                    ov[i, j] = _profile(family, p0, shape * r)
    return out
