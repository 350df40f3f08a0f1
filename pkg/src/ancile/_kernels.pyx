# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``_pykernels`` exactly in signature."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

DEF KS = 0
DEF CVM = 1
DEF AD = 2


def edf_rows(double[:, ::1] u, int kind):
    cdef Py_ssize_t reps = u.shape[0], n = u.shape[1], r, i
    cdef double[::1] out = np.empty(reps)
    cdef double acc, d, dn = <double>n, ui
    cdef double[:, ::1] lo, hi
    if kind not in (KS, CVM, AD):
        raise ValueError(f"unknown EDF kind {kind}")
    if kind == AD:
        # numpy's vectorized logs beat scalar libm calls; only the reduction runs here
        lo = np.log(u)
        hi = np.log1p(np.negative(u))
    with nogil:
        for r in range(reps):
            if kind == KS:
                acc = 0.0
                for i in range(n):
                    ui = u[r, i]
                    d = (i + 1) / dn - ui
                    if d > acc:
                        acc = d
                    d = ui - i / dn
                    if d > acc:
                        acc = d
                out[r] = acc
            elif kind == CVM:
                acc = 0.0
                for i in range(n):
                    d = u[r, i] - (2 * i + 1) / (2 * dn)
                    acc += d * d
                out[r] = acc + 1.0 / (12 * dn)
            else:
                acc = 0.0
                for i in range(n):
                    acc += (2 * i + 1) * (lo[r, i] + hi[r, n - 1 - i])
                out[r] = -dn - acc / dn
    return np.asarray(out)


cdef inline double _dist(double[:, ::1] x, Py_ssize_t k, Py_ssize_t l) nogil:
    cdef Py_ssize_t j, p = x.shape[1]
    cdef double s = 0.0, d
    if p == 1:
        return fabs(x[k, 0] - x[l, 0])
    for j in range(p):
        d = x[k, j] - x[l, j]
        s += d * d
    return sqrt(s)


def dcov_sums(x, y):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], k, l
    cdef double a, b, ra, rb
    cdef double s_ab = 0.0, s_a = 0.0, s_b = 0.0, s_rr = 0.0
    with nogil:
        for k in range(m):
            ra = 0.0
            rb = 0.0
            for l in range(m):
                a = _dist(xv, k, l)
                b = _dist(yv, k, l)
                ra += a
                rb += b
                s_ab += a * b
            s_a += ra
            s_b += rb
            s_rr += ra * rb
    return s_ab, s_a, s_b, s_rr


cdef void _row_means(double[:, ::1] x, double[::1] out) nogil:
    cdef Py_ssize_t m = x.shape[0], k, l
    cdef double acc
    for k in range(m):
        acc = 0.0
        for l in range(m):
            acc += _dist(x, k, l)
        out[k] = acc / m


def dcov_centered(x, y):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], k, l
    cdef double[::1] ma = np.empty(m)
    cdef double[::1] mb = np.empty(m)
    cdef double ga = 0.0, gb = 0.0, A, B
    cdef double s_ab = 0.0, s_aa = 0.0, s_bb = 0.0
    with nogil:
        _row_means(xv, ma)
        _row_means(yv, mb)
        for k in range(m):
            ga += ma[k]
            gb += mb[k]
        ga /= m
        gb /= m
        for k in range(m):
            for l in range(m):
                A = _dist(xv, k, l) - ma[k] - ma[l] + ga
                B = _dist(yv, k, l) - mb[k] - mb[l] + gb
                s_ab += A * B
                s_aa += A * A
                s_bb += B * B
    return s_ab, s_aa, s_bb
