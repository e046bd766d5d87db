"""Backend selection for the series kernels.

The compiled extension is used when it was built; set WEIGHTSPACE_PURE=1
to force the numpy fallback.
"""

import os

import numpy as np

if os.environ.get("WEIGHTSPACE_PURE", "") not in ("", "0"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"


def horner_complex(coeffs, z):
    """Evaluate sum_k coeffs[k] z**k at every point of z (any shape)."""
    z = np.asarray(z, dtype=complex)
    out = _impl.horner_complex(np.ascontiguousarray(coeffs, dtype=complex),
                               np.ascontiguousarray(z.ravel()))
    return np.asarray(out).reshape(z.shape)


def horner_real(coeffs, x):
    x = np.asarray(x, dtype=float)
    out = _impl.horner_real(np.ascontiguousarray(coeffs, dtype=float),
                            np.ascontiguousarray(x.ravel()))
    return np.asarray(out).reshape(x.shape)


def block_sums(a, bounds):
    """Sums of a over consecutive index ranges [bounds[j], bounds[j+1])."""
    return np.asarray(_impl.block_sums(np.ascontiguousarray(a, dtype=float),
                                       np.ascontiguousarray(bounds, dtype=np.int64)))
