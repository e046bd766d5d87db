# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Horner evaluation of long series and block sums."""

import numpy as np


# the point loop is innermost so the per-point recurrences run independently
# instead of one latency-bound chain at a time

def horner_complex(const double complex[::1] coeffs, const double complex[::1] z):
    cdef Py_ssize_t n = coeffs.shape[0], m = z.shape[0], i, k
    cdef double[::1] zr = np.ascontiguousarray(np.asarray(z).real)
    cdef double[::1] zi = np.ascontiguousarray(np.asarray(z).imag)
    cdef double[::1] ar = np.zeros(m)
    cdef double[::1] ai = np.zeros(m)
    cdef double cr, ci, t
    for k in range(n - 1, -1, -1):
        cr = coeffs[k].real
        ci = coeffs[k].imag
        for i in range(m):
            t = ar[i] * zr[i] - ai[i] * zi[i] + cr
            ai[i] = ar[i] * zi[i] + ai[i] * zr[i] + ci
            ar[i] = t
    return np.asarray(ar) + 1j * np.asarray(ai)


def horner_real(const double[::1] coeffs, const double[::1] x):
    cdef Py_ssize_t n = coeffs.shape[0], m = x.shape[0], i, k
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] acc = out
    cdef double c
    for k in range(n - 1, -1, -1):
        c = coeffs[k]
        for i in range(m):
            acc[i] = acc[i] * x[i] + c
    return out


def block_sums(const double[::1] a, const long long[::1] bounds):
    """Sums of a over [bounds[j], bounds[j+1]), clipped to len(a)."""
    cdef Py_ssize_t nb = bounds.shape[0] - 1, n = a.shape[0], j, k, lo, hi
    out = np.zeros(max(nb, 0), dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc
    for j in range(nb):
        lo = bounds[j]
        hi = bounds[j + 1]
        if hi > n:
            hi = n
        acc = 0.0
        for k in range(lo, hi):
            acc += a[k]
        o[j] = acc
    return out
