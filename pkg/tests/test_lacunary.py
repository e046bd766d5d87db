import math

import numpy as np
import pytest
from scipy import integrate

from weightspace.errors import DomainError
from weightspace.lacunary import block_sum, decompose
from weightspace.weights import make_weight


def test_constant_blocks():
    dec = decompose(make_weight("constant"), 2, 3)
    assert dec.r == pytest.approx((0, 0.5, 0.75, 0.875))
    assert dec.M == (1, 2, 4, 8)
    assert [list(b) for b in dec.blocks] == [[0, 1], [2, 3], [4, 5, 6, 7]]


def test_power_blocks():
    dec = decompose(make_weight("power:1"), 4, 2)
    assert dec.r == pytest.approx((0, 0.5, 0.75))
    assert dec.M == (1, 2, 4)


def test_v2_radii():
    dec = decompose(make_weight("v_alpha:2"), 2, 4)
    u = -np.log1p(-np.array(dec.r))
    assert 1 + u == pytest.approx(2.0 ** np.arange(5), rel=1e-10)


@pytest.mark.parametrize("spec", ["constant", "power:1", "power:2", "v_alpha:3"])
def test_invariants(spec):
    w = make_weight(spec)
    dec = decompose(w, 2)
    r = np.array(dec.r)
    assert r[0] == 0 and np.all(np.diff(r) > 0)
    assert np.all(np.diff(dec.M) >= 0)
    edges = dec.bounds
    assert sum(len(b) for b in dec.blocks) == edges[-1]
    keep = 1 - r > 1e-12
    tail = w.tail(r[keep]) * 2.0 ** np.arange(r.size)[keep]
    assert np.all(np.abs(tail / w.tail(0.0) - 1) < 1e-10 + 1e-15 / (1 - r[keep]))


def test_default_depth_stops_near_boundary():
    dec = decompose(make_weight("constant"), 2)
    assert 1 - dec.r[-1] < 1e-12 <= 1 - dec.r[-2]
    assert decompose(make_weight("v_alpha:2"), 2).depth == 40 or \
        1 - decompose(make_weight("v_alpha:2"), 2).r[-1] < 1e-12


def test_block_sum_examples():
    one = decompose(make_weight("constant"), 2, 3)
    assert block_sum([1, 1, 1, 1], 1, one) == pytest.approx(3.0)
    assert block_sum([1] * 8, 2, one) == pytest.approx(10.0)
    for p in (0.5, 1, 3):
        assert block_sum([1], p, decompose(make_weight("power:2"), 3, 5)) == pytest.approx(1.0)


def test_errors():
    dec = decompose(make_weight("constant"), 2, 3)
    with pytest.raises(DomainError):
        block_sum([1, -1], 1, dec)
    with pytest.raises(DomainError):
        decompose(make_weight("constant"), 1.0, 3)
    with pytest.raises(DomainError):
        decompose(make_weight("constant"), 2, 0)


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_block_growth_bounded(alpha):
    M = np.array(decompose(make_weight(f"power:{alpha}"), 2, 30).M, dtype=float)
    # the floor repeats edges while M is small; the bracket is asymptotic
    big = M[:-1] >= 32
    q = M[1:][big] / M[:-1][big]
    assert q.size >= 5
    assert np.all((q >= 1.2) & (q <= 32))


def weighted_integral(a, p, w, squared=False):
    c = np.asarray(a, dtype=float)[::-1]

    def g(r):
        x = r * r if squared else r
        return np.polyval(c, x) ** p * w.density(r)

    pts = [1 - 2.0**-j for j in range(1, 12)]
    return integrate.quad(g, 0, 1, points=pts, limit=500, epsrel=1e-8)[0]


@pytest.mark.parametrize("alpha", [0, 1, 2])
@pytest.mark.parametrize("p", [0.5, 1, 2])
def test_two_sided_estimate(alpha, p):
    w = make_weight(f"power:{alpha}")
    dec = decompose(w, 2)
    rng = np.random.default_rng(int(10 * alpha + 4 * p))
    for _ in range(12):
        N = int(rng.integers(8, 1025))
        a = np.where(rng.random(N) < 0.05, rng.random(N), 0.0)
        a[rng.integers(N)] = 1.0
        s = block_sum(a, p, dec)
        for squared in (False, True):
            ratio = weighted_integral(a, p, w, squared) / s
            assert 1e-3 <= ratio <= 1e3
