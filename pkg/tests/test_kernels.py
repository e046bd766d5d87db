import os
import subprocess
import sys

import numpy as np
import pytest

from weightspace import _kernels_py, kernels

try:
    from weightspace import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


def test_horner_against_polyval():
    rng = np.random.default_rng(0)
    c = rng.normal(size=50) + 1j * rng.normal(size=50)
    z = 0.9 * np.exp(1j * rng.uniform(0, 6.3, size=(4, 7)))
    want = np.polynomial.polynomial.polyval(z, c)
    assert np.allclose(kernels.horner_complex(c, z), want, rtol=1e-13, atol=0)
    x = rng.uniform(0, 1, 30)
    assert np.allclose(kernels.horner_real(c.real, x),
                       np.polynomial.polynomial.polyval(x, c.real), rtol=1e-13)


def test_block_sums():
    a = np.arange(10, dtype=float)
    assert kernels.block_sums(a, [0, 2, 2, 5, 10]).tolist() == [1, 0, 9, 35]


@needs_compiled
def test_backends_agree():
    rng = np.random.default_rng(1)
    c = rng.normal(size=257) + 1j * rng.normal(size=257)
    z = np.ascontiguousarray(0.99 * np.exp(1j * rng.uniform(0, 6.3, 500)))
    a = np.asarray(compiled.horner_complex(c, z))
    b = np.asarray(_kernels_py.horner_complex(c, z))
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))
    x = np.ascontiguousarray(rng.uniform(0, 1, 500))
    cr = np.ascontiguousarray(c.real)
    assert np.allclose(compiled.horner_real(cr, x), _kernels_py.horner_real(cr, x),
                       rtol=1e-12, atol=1e-300)
    v = np.ascontiguousarray(rng.random(1000))
    bounds = np.array([0, 1, 1, 10, 100, 1000], dtype=np.int64)
    assert np.allclose(compiled.block_sums(v, bounds), _kernels_py.block_sums(v, bounds),
                       rtol=1e-13)


def test_pure_switch():
    env = dict(os.environ, WEIGHTSPACE_PURE="1")
    out = subprocess.run([sys.executable, "-c",
                          "from weightspace import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "python"
