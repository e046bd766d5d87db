"""Pure-numpy versions of the compiled kernels."""

import numpy as np


def horner_complex(coeffs, z):
    coeffs = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def horner_real(coeffs, x):
    coeffs = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    acc = np.zeros_like(x)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def block_sums(a, bounds):
    a = np.asarray(a, dtype=float)
    bounds = np.minimum(np.asarray(bounds, dtype=np.int64), a.size)
    csum = np.concatenate([[0.0], np.cumsum(a)])
    return csum[bounds[1:]] - csum[bounds[:-1]]
