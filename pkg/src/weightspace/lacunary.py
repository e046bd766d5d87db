"""Dyadic-type block decomposition of the index set driven by a weight.

For K > 1 the radii r_n solve omega-hat(r_n) = K^-n omega-hat(0), and the
blocks I(n) = [M_n, M_{n+1}) with M_n = floor(1 / (1 - r_n)) group the
Maclaurin coefficients so that the weighted integral of g(r)^p for
g(r) = sum a_k r^k is comparable to the block sum
sum_n K^-n (sum over I(n) of a_k)^p.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .weight_classes import rho_sequence_u
from .weights import RadialWeight, make_weight

DEFAULT_DEPTH = 40
MIN_DISTANCE = 1e-12
_SNAP = 1e-9


@dataclass(frozen=True)
class LacunaryDecomposition:
    """Radii r_0..r_depth, integers M_0..M_depth and the blocks between them.

    Block I(0) is [0, M_1); block I(n) for n >= 1 is [M_n, M_{n+1}).
    Empty blocks (M_{n+1} = M_n) are kept so indices stay aligned with n.
    """

    K: float
    r: tuple
    M: tuple
    weight_label: str = ""
    weight_spec: dict = None

    @property
    def depth(self):
        return len(self.r) - 1

    @property
    def bounds(self):
        """Block edges [0, M_1, ..., M_depth]."""
        return (0,) + tuple(self.M[1:])

    @property
    def blocks(self):
        b = self.bounds
        return [range(b[n], b[n + 1]) for n in range(self.depth)]

    @property
    def empty_blocks(self):
        return [n for n, blk in enumerate(self.blocks) if len(blk) == 0]

    def to_dict(self):
        return {"K": self.K, "depth": self.depth, "weight": self.weight_spec,
                "weight_label": self.weight_label, "r": list(self.r), "M": list(self.M),
                "blocks": [[b.start, b.stop] for b in self.blocks],
                "empty_blocks": self.empty_blocks}


def _floor_snapped(x):
    # 1/(1 - r_n) lands a rounding error away from an integer for the
    # weights whose radii are dyadic; snap those before taking the floor
    near = np.round(x)
    return np.where(np.abs(x - near) <= _SNAP * np.maximum(near, 1.0), near, np.floor(x))


def decompose(omega, K, depth=None):
    """Decomposition of depth ``depth`` (default: 40 or until 1 - r_n < 1e-12)."""
    w = omega if isinstance(omega, RadialWeight) else make_weight(omega)
    K = float(K)
    if not K > 1:
        raise DomainError(f"K must exceed 1, got {K}")
    auto = depth is None
    if not auto:
        depth = int(depth)
        if depth < 1:
            raise DomainError(f"depth must be at least 1, got {depth}")
    n = DEFAULT_DEPTH if auto else depth
    u = rho_sequence_u(w, K, n)
    if auto:
        # keep radii up to and including the first with 1 - r_n < 1e-12
        far = np.flatnonzero(u > -math.log(MIN_DISTANCE))
        if far.size:
            u = u[:max(int(far[0]) + 1, 2)]
    r = -np.expm1(-u)
    with np.errstate(over="ignore"):
        M = _floor_snapped(np.exp(u))
    if not np.all(np.isfinite(M)) or M[-1] > 2.0**62:
        raise DomainError("block edges overflow; reduce depth")
    return LacunaryDecomposition(K, tuple(float(x) for x in r), tuple(int(m) for m in M),
                                 w.label, w.spec.to_dict())


def block_sum(a, p, dec):
    """sum over n < depth of K^-n (sum over I(n) of a_k)^p.

    Coefficients beyond M_depth fall outside every block and are ignored;
    missing ones count as zero.
    """
    a = np.asarray(a, dtype=float).ravel()
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if not np.all(np.isfinite(a)):
        raise DomainError("coefficients must be finite")
    if np.any(a < 0):
        raise DomainError("block sums need nonnegative coefficients")
    bounds = np.minimum(np.asarray(dec.bounds, dtype=np.int64), a.size)
    sums = kernels.block_sums(a, bounds)
    n = np.arange(sums.size)
    return float(np.sum(np.exp(-n * math.log(dec.K)) * sums ** p))
