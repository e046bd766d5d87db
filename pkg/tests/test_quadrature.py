import math

import numpy as np
import pytest

from weightspace.errors import DomainError
from weightspace.quadrature import (QuadratureConfig, integrate_disc, integrate_exp,
                                    integrate_interval, integrate_radial)


def test_radial_polynomial():
    assert integrate_radial(lambda r: r).value == pytest.approx(0.5, rel=1e-12)


def test_radial_inverse_sqrt_endpoint():
    res = integrate_radial(lambda d: d ** -0.5, distance=True)
    assert res.value == pytest.approx(2.0, rel=1e-9)


def test_radial_log_power_tail():
    # u = log(e / (1 - r)) turns the integrand into u^-2 on [1, inf)
    res = integrate_radial(lambda d: 1 / (d * (1 - np.log(d)) ** 2), distance=True)
    assert res.value == pytest.approx(1.0, rel=1e-8)


def test_radial_log_power_tail_graded_sum():
    # midpoint rule on a mesh graded geometrically in 1 + u
    u = np.expm1(np.linspace(0, math.log(2001), 200001))
    mid = 0.5 * (u[1:] + u[:-1])
    total = np.sum(np.diff(u) / (1 + mid) ** 2) + 1 / 2001
    assert total == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("h, radius, expected", [
    (lambda z: np.ones(z.shape), 1.0, math.pi),
    (lambda z: np.abs(z) ** 2, 1.0, math.pi / 2),
    (lambda z: np.abs(2 * z) ** 2, 0.5, math.pi / 8),
])
def test_disc(h, radius, expected):
    assert integrate_disc(h, radius).value == pytest.approx(expected, rel=1e-10)


def test_linearity():
    g1 = lambda r: r ** 2  # noqa: E731
    g2 = lambda r: np.sqrt(1 - r)  # noqa: E731
    a, b = 3.0, -0.5
    cfg = QuadratureConfig()
    i1 = integrate_radial(g1, cfg).value
    i2 = integrate_radial(g2, cfg).value
    i = integrate_radial(lambda r: a * g1(r) + b * g2(r), cfg).value
    assert abs(i - (a * i1 + b * i2)) <= 10 * cfg.rel_tol * (abs(a * i1) + abs(b * i2))


def test_monotonicity():
    cfg = QuadratureConfig()
    res = integrate_radial(lambda r: np.abs(np.sin(40 * r)) * 1e-14, cfg)
    assert res.value >= -cfg.abs_tol


def test_graded_matches_ungraded():
    g = lambda r: np.exp(r) * np.cos(3 * r)  # noqa: E731
    graded = integrate_radial(g, QuadratureConfig()).value
    plain = integrate_radial(g, QuadratureConfig(endpoint_grading=False)).value
    assert graded == pytest.approx(plain, rel=1e-8)


def test_exp_far_outside_float_range():
    # log of int_0^inf exp(1000 - t) dt is 1000
    res = integrate_exp(lambda t: 1000.0 - t)
    assert res.value == pytest.approx(1000.0, rel=1e-12)


def test_exp_divergent_reported():
    res = integrate_exp(lambda t: -0.5 * np.log1p(t))
    assert not res.ok


def test_interval_reversed():
    assert integrate_interval(lambda x: x, 1.0, 0.0).value == pytest.approx(-0.5)


def test_bad_limits():
    with pytest.raises(DomainError):
        integrate_radial(lambda r: r, upper=1.5)
    with pytest.raises(DomainError):
        integrate_interval(lambda x: x, 0.0, math.inf)


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("WEIGHTSPACE_TOL", "1e-6")
    assert QuadratureConfig.default().rel_tol == 1e-6
    monkeypatch.setenv("WEIGHTSPACE_TOL", "x")
    with pytest.raises(DomainError):
        QuadratureConfig.default()
