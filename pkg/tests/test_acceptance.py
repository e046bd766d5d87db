"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line with the measured quantity next
to its pinned threshold, then asserts the criterion.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from weightspace.functionals import (area_by_quadrature, area_image, bergman_identity,
                                     h_class_norm, hardy_stein_spencer, j_functional,
                                     s_class_norm)
from weightspace.functions import integral_mean, make_function, max_modulus, taylor_majorant
from weightspace.harness import run_divergence
from weightspace.lacunary import block_sum, decompose
from weightspace.weight_classes import HOLDS, FAILS, classify, evaluate_condition
from weightspace.weights import make_weight, modify, tail_weight

AREA_TOL = 1e-8
MONOMIAL_TOL = 1e-6
IDENTITY_TOL = 1e-4
V2_DHAT_BOUND = 1 + math.log(2) + 1e-3
V2_DCHECK_WINDOW = 0.01
WEIGHT_ID_TOL = 1e-6
T2_SPREAD_MAX = 1e2
T2_STABILITY = 2.0
LACUNARY_BRACKET = (1e-3, 1e3)
LACUNARY_DRAWS = 100
DIVERGENCE_GROWTH = 3.0
CONTROL_CHANGE = 0.5
CTC_CONSTANT = 4.0

FIXTURES = ["monomial:1", "monomial:2", "monomial:4", "monomial:8", "log_map", "koebe",
            "coeffs:1,1", "coeffs:0,1,-1"]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


def _random_poly(seed, degree):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return make_function("coeffs:" + ",".join(f"{float(x.real)!r}{float(x.imag):+.17g}j"
                                              for x in c))


def test_1_area_series_vs_quadrature(report):
    worst = 0.0
    for seed, degree in enumerate((1, 4, 16, 32)):
        f = _random_poly(seed, degree)
        for r in np.arange(1, 10) / 10:
            a, q = area_image(f, r), area_by_quadrature(f, r)
            worst = max(worst, abs(a - q) / abs(a))
    ok = worst < AREA_TOL
    report(1, ok, f"max relative error {worst:.3g} (< {AREA_TOL:g})")
    assert ok


def test_2_monomial_identities(report):
    worst = 0.0
    for spec in ("constant", "power:1", "power:2", "v_alpha:3"):
        w = make_weight(spec)
        for n in (1, 2, 4, 8):
            f = make_function(f"monomial:{n}")
            for p in (0.5, 1.0, 2.0, 3.0):
                m = w.moment(n * p)
                pairs = [(j_functional(f, p, w, closed_forms=False).value, m),
                         (h_class_norm(f, p, w, closed_forms=False).value,
                          2 * math.pi * n * p * m),
                         (s_class_norm(f, p, w, closed_forms=False).value,
                          (math.pi * n) ** (p / 2) * m)]
                worst = max(worst, max(abs(a / b - 1) for a, b in pairs))
    ok = worst < MONOMIAL_TOL
    report(2, ok, f"max relative error {worst:.3g} over J, H, S by quadrature (< {MONOMIAL_TOL:g})")
    assert ok


def test_3_laplacian_identities(report):
    one = make_weight("constant")
    hss = ap = 0.0
    for spec in ("coeffs:1,1", "monomial:2", "log_map"):
        f = make_function(spec)
        for p in (1.0, 2.0, 3.0):
            for r in (0.5, 0.9):
                lhs, rhs = hardy_stein_spencer(f, p, r)
                hss = max(hss, abs(rhs / lhs - 1))
            lhs, rhs = bergman_identity(f, p, one)
            ap = max(ap, abs(rhs / lhs - 1))
    ok = max(hss, ap) < IDENTITY_TOL
    report(3, ok, f"Hardy-Stein-Spencer {hss:.3g}, A^p identity {ap:.3g} (< {IDENTITY_TOL:g})")
    assert ok


def test_4_weight_class_verdicts(report):
    checks = []
    c = classify(make_weight("constant"))
    d = evaluate_condition(make_weight("constant"), "Dhat-def").best_constant
    checks.append(("constant in D", c.classes["D"].verdict == HOLDS))
    checks.append((f"constant Dhat-def {d:.12g} == 2", abs(d - 2) < 1e-12))
    for alpha in (1, 2):
        w = make_weight(f"power:{alpha}")
        d = evaluate_condition(w, "Dhat-def").best_constant
        checks.append((f"power:{alpha} in D", classify(w).classes["D"].verdict == HOLDS))
        checks.append((f"power:{alpha} Dhat-def {d:.12g} == {2 ** (alpha + 1)}",
                       abs(d / 2 ** (alpha + 1) - 1) < 1e-9))
    v2 = make_weight("v_alpha:2")
    cv = classify(v2)
    dh = evaluate_condition(v2, "Dhat-def").best_constant
    dc = evaluate_condition(v2, "Dcheck-def(K=2)").best_constant
    checks.append((f"v_2 Dhat holds, constant {dh:.6g} <= {V2_DHAT_BOUND:.6g}",
                   cv.classes["Dhat"].verdict == HOLDS and dh <= V2_DHAT_BOUND))
    checks.append((f"v_2 Dcheck fails, inf ratio {dc:.6g} within {V2_DCHECK_WINDOW} of 1",
                   cv.classes["Dcheck"].verdict == FAILS and abs(dc - 1) <= V2_DCHECK_WINDOW))
    ce = classify(make_weight("exponential:1"))
    checks.append(("exponential M holds, Dhat fails",
                   ce.classes["M"].verdict == HOLDS and ce.classes["Dhat"].verdict == FAILS))
    failed = [name for name, ok in checks if not ok]
    ok = not failed
    report(4, ok, f"{len(checks) - len(failed)}/{len(checks)} verdicts"
           + (f"; failed: {'; '.join(failed)}" if failed else ""))
    assert ok


def test_5_weight_identities(report):
    ibp = fub = 0.0
    for alpha in (0, 1, 2):
        w = make_weight(f"power:{alpha}", closed_forms=False)
        h = tail_weight(w)
        for q in (0.5, 2.0, 3.0):
            for x in (0.0, 1.0, 5.0, 20.0):
                lhs = modify(w, q - 1).moment(x + 1)
                rhs = (x + 1) * modify(h, q - 1).moment(x) \
                    - (q - 1) * modify(h, q - 2).moment(x + 1)
                ibp = max(ibp, abs(rhs / lhs - 1))
                # the Fubini identity tested against r^x
                lhs = tail_weight(modify(h, q - 2)).moment(x)
                rhs = (modify(h, q - 1).moment(x)
                       - tail_weight(modify(w, q - 1)).moment(x)) / (q - 1)
                fub = max(fub, abs(rhs / lhs - 1))
    ok = max(ibp, fub) < WEIGHT_ID_TOL
    report(5, ok, f"integration by parts {ibp:.3g}, Fubini {fub:.3g} (< {WEIGHT_ID_TOL:g})")
    assert ok


def test_6_moment_ratio_bracket(report):
    worst, drift = 0.0, 1.0
    for alpha in (0, 1, 2):
        w = make_weight(f"power:{alpha}")
        h = tail_weight(w)
        for q in (1.5, 2.0, 3.0):
            lo_w, hi_w = modify(h, q - 2), modify(w, q - 1)
            for p in (1.0, 2.0):
                n = np.arange(65)
                ratio = np.array([lo_w.moment(k * p + 1) / hi_w.moment(k * p + 1) for k in n])
                s32 = ratio[:33].max() / ratio[:33].min()
                s64 = ratio.max() / ratio.min()
                worst = max(worst, s64)
                drift = max(drift, s64 / s32)
    ok = worst < T2_SPREAD_MAX and drift < T2_STABILITY
    report(6, ok, f"max spread {worst:.6g} (< {T2_SPREAD_MAX:g}), "
           f"spread change 32 -> 64 {drift:.6g} (< {T2_STABILITY:g})")
    assert ok


def _weighted_integral(a, p, w, squared):
    c = np.asarray(a, dtype=float)[::-1]

    def g(r):
        return np.polyval(c, r * r if squared else r) ** p * w.density(r)

    pts = [1 - 2.0**-j for j in range(1, 12)]
    return integrate.quad(g, 0, 1, points=pts, limit=500, epsrel=1e-8)[0]


def test_7_lacunary_estimate(report):
    lo, hi = LACUNARY_BRACKET
    ratios, draws = [], 0
    rng = np.random.default_rng(2024)
    for alpha in (0, 1, 2):
        w = make_weight(f"power:{alpha}")
        dec = decompose(w, 2)
        for p in (0.5, 1.0, 2.0):
            for _ in range(12):
                N = int(rng.integers(8, 1025))
                a = np.where(rng.random(N) < 0.05, rng.random(N), 0.0)
                a[rng.integers(N)] = 1.0
                s = block_sum(a, p, dec)
                ratios += [_weighted_integral(a, p, w, sq) / s for sq in (False, True)]
                draws += 1
    ratios = np.array(ratios)
    bad = int(np.sum((ratios < lo) | (ratios > hi)))
    ok = bad == 0 and draws >= LACUNARY_DRAWS
    report(7, ok, f"{draws} draws, ratios in [{ratios.min():.3g}, {ratios.max():.3g}], "
           f"{bad} outside [{lo:g}, {hi:g}]")
    assert ok


def test_8_counterexample_divergence(report):
    rep = run_divergence("L6.3-fail", 1.0)
    ctl = run_divergence("L6.3-fail", 1.0, alpha=4.0)
    change = abs(ctl.growth - 1)
    ok = rep.monotone and rep.growth >= DIVERGENCE_GROWTH and change < CONTROL_CHANGE
    report(8, ok, f"growth 1e-2 -> 1e-8 {rep.growth:.4g} (>= {DIVERGENCE_GROWTH:g}), "
           f"monotone {rep.monotone}; control alpha=4 change {change:.3g} "
           f"(< {CONTROL_CHANGE:g})")
    assert ok


def test_9_close_to_convex_bound(report):
    worst = 0.0
    for spec in ("koebe", "log_map"):
        f = make_function(spec)
        for k in range(2, 65, 2):
            r = 1 - 1 / k
            worst = max(worst, abs(f.coeffs[k]) * k * r**k / max_modulus(f, r))
    ok = worst <= CTC_CONSTANT
    report(9, ok, f"max |a_k| k r^k / M_inf(r, f) = {worst:.6g} (<= {CTC_CONSTANT:g})")
    assert ok


def test_10_hardy_littlewood_and_majorant(report):
    hl = maj = checked = 0
    for spec in FIXTURES:
        f = make_function(spec)
        a0 = abs(f.coeffs[0])
        for r in (0.5, 0.9, 0.99):
            if max_modulus(f, r) - a0 > taylor_majorant(f, r) * (1 + 1e-12):
                maj += 1
            for p in (0.5, 1.0, 2.0, 3.0):
                lhs = integrate.quad(lambda t: max_modulus(f, t) ** p, 0, r, epsrel=1e-10)[0]
                if lhs > math.pi * r * integral_mean(f, p, r) ** p * (1 + 1e-8):
                    hl += 1
                checked += 1
    ok = hl == 0 and maj == 0
    report(10, ok, f"{checked} (f, p, r) cases: {hl} Hardy-Littlewood violations, "
           f"{maj} majorant violations")
    assert ok

