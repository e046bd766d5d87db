"""Compare the compiled and pure-Python series kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from weightspace import _kernels_py

try:
    from weightspace import _kernels as compiled
except ImportError:
    compiled = None


def cases(rng):
    c = np.ascontiguousarray(rng.normal(size=4097) + 1j * rng.normal(size=4097))
    z = np.ascontiguousarray(0.99 * np.exp(1j * rng.uniform(0, 2 * np.pi, 512)))
    x = np.ascontiguousarray(rng.uniform(0, 1, 512))
    a = np.ascontiguousarray(rng.random(1 << 20))
    bounds = np.unique(np.concatenate([[0], rng.integers(0, a.size, 40), [a.size]]))
    return {
        "horner_complex N=4096 x 512": ("horner_complex", (c, z)),
        "horner_complex N=4096 x 1": ("horner_complex", (c, z[:1].copy())),
        "horner_real N=4096 x 512": ("horner_real", (np.ascontiguousarray(c.real), x)),
        "block_sums 2^20, 40 blocks": ("block_sums", (a, bounds.astype(np.int64))),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    print(f"{'kernel':<30}" + "".join(f"{name:>14}" for name, _ in backends) + "   speedup")
    for label, (fn, argv) in cases(np.random.default_rng(0)).items():
        times = []
        for _, mod in backends:
            f = getattr(mod, fn)
            times.append(min(timeit.repeat(lambda: f(*argv), number=3, repeat=args.repeat)) / 3)
        speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 else "      n/a"
        print(f"{label:<30}" + "".join(f"{t * 1e3:12.3f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
