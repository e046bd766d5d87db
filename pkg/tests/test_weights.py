import math

import numpy as np
import pytest
from scipy import integrate, special

from weightspace.errors import NonIntegrableWeightError, SpecError
from weightspace.weights import (WeightSpec, make_weight, modify, moment, scaled, star, tail,
                                 tail_weight, tilde)


def test_constant_and_power_tails():
    w = make_weight("constant")
    assert w.density(0.4) == pytest.approx(1.0)
    assert tail(w, 0.3) == pytest.approx(0.7, rel=1e-14)
    assert tail(make_weight("power:1"), 0.5) == pytest.approx(0.125, rel=1e-14)


def test_log_power_tail():
    w = make_weight("v_alpha:2")
    r = 0.9
    assert tail(w, r) == pytest.approx(1 / math.log(math.e / (1 - r)), rel=1e-12)
    assert tail(w, 1 - 1 / math.e) == pytest.approx(0.5, rel=1e-12)


def test_log_power_tail_by_quadrature():
    w = make_weight("v_alpha:2", closed_forms=False)
    assert tail(w, 1 - 1 / math.e) == pytest.approx(0.5, rel=1e-8)


def test_moments_closed():
    assert moment(make_weight("constant"), 2) == pytest.approx(1 / 3, rel=1e-14)
    assert moment(make_weight("power:1"), 1) == pytest.approx(1 / 6, rel=1e-14)


@pytest.mark.parametrize("spec", ["constant", "power:1", "power:2.5"])
@pytest.mark.parametrize("x", [0.0, 1.0, 7.5, 100.0])
def test_moments_quadrature_match_beta(spec, x):
    w = make_weight(spec, closed_forms=False)
    alpha = float(spec.partition(":")[2] or 0)
    assert moment(w, x) == pytest.approx(special.beta(x + 1, alpha + 1), rel=1e-8)


def test_v3_moment_vs_tail():
    w = make_weight("v_alpha:3")
    ref = math.log(math.e * 10) ** -2 / 2
    assert 0.25 <= moment(w, 10) / ref <= 4


def test_v3_moment_scipy():
    w = make_weight("v_alpha:3")
    # in u = -log(1 - r): (1 - e^-u)^10 (1 + u)^-3 du
    ref = integrate.quad(lambda u: (-math.expm1(-u)) ** 10 / (1 + u) ** 3, 0, math.inf,
                         limit=400, epsabs=0, epsrel=1e-11)[0]
    assert moment(w, 10) == pytest.approx(ref, rel=1e-7)


def test_modify():
    w = modify(make_weight("constant"), 1)
    assert w.spec == WeightSpec.parse("power:1")
    w2 = modify(make_weight("power:1"), 2)
    assert moment(w2, 0) == pytest.approx(0.25, rel=1e-14)
    with pytest.raises(NonIntegrableWeightError):
        modify(make_weight("v_alpha:2"), -1)


def test_tilde():
    assert tilde(make_weight("constant")).density(0.3) == pytest.approx(1.0)
    assert tilde(make_weight("power:1")).density(0.4) == pytest.approx(0.3, rel=1e-14)
    with pytest.raises(NonIntegrableWeightError):
        tilde(make_weight("v_alpha:2"))


def test_tail_weight_moments_fubini():
    w = make_weight("v_alpha:3")
    h = tail_weight(w)
    # (omega-hat)_x = omega_{x+1} / (x+1)
    for x in (0.0, 2.0, 9.0):
        assert h.moment(x) == pytest.approx(w.moment(x + 1) / (x + 1), rel=1e-8)


def test_star_constant():
    nu = make_weight("constant")
    r = 0.5
    assert star(nu, r) == pytest.approx((r * r - 1) / 4 - math.log(r) / 2, rel=1e-8)
    assert 0 < star(nu, 0.9) < star(nu, 0.5)
    assert star(nu, 1 - 1e-9) < 1e-15


def test_scale():
    w = scaled(make_weight("v_alpha:3"), 2.5)
    assert w.tail(0.7) == pytest.approx(2.5 * make_weight("v_alpha:3").tail(0.7), rel=1e-14)


@pytest.mark.parametrize("spec", ["constant", "power:1", "v_alpha:3", "exponential:1"])
def test_tail_moment_monotone(spec):
    w = make_weight(spec)
    r = np.linspace(0, 0.99, 50)
    t = w.tail(r)
    assert np.all(np.diff(t) < 0)
    assert t[0] == pytest.approx(w.moment(0.0), rel=1e-8)
    m = w.moment(np.array([0.0, 1.0, 3.0, 10.0, 50.0]))
    assert np.all(np.diff(m) < 0)
    assert np.all(m <= t[0] * (1 + 1e-12))


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
@pytest.mark.parametrize("q", [2.0, 3.0])
@pytest.mark.parametrize("x", [0.0, 1.0, 5.0, 20.0])
def test_integration_by_parts(alpha, q, x):
    w = make_weight(f"power:{alpha}", closed_forms=False)
    lhs = modify(w, q - 1).moment(x + 1)
    rhs = (x + 1) * modify(tail_weight(w), q - 1).moment(x) \
        - (q - 1) * modify(tail_weight(w), q - 2).moment(x + 1)
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_spec_roundtrip():
    for text in ["constant", "power:1.5", "v_alpha:3", "exponential:2"]:
        s = WeightSpec.parse(text)
        assert WeightSpec.from_dict(s.to_dict()) == s
    d = modify(make_weight("v_alpha:3"), 0.5).spec.to_dict()
    assert make_weight(d).tail(0.5) == pytest.approx(
        modify(make_weight("v_alpha:3"), 0.5).tail(0.5))
    with pytest.raises(SpecError):
        WeightSpec.parse("nonsense:1")
