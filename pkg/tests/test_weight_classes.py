import math

import numpy as np
import pytest

from weightspace.errors import SpecError
from weightspace.weight_classes import (FAILS, HOLDS, ConditionId, classify,
                                        default_r_grid, default_x_grid, evaluate_condition,
                                        rho_sequence)
from weightspace.weights import make_weight, scaled


def test_dhat_def_constant():
    rep = evaluate_condition(make_weight("constant"), "Dhat-def")
    assert rep.best_constant == pytest.approx(2.0, rel=1e-12)
    assert rep.verdict == HOLDS


def test_dhat_moment_constant():
    rep = evaluate_condition(make_weight("constant"), ConditionId("Dhat-moment", 1.0))
    x = default_x_grid()
    assert rep.best_constant == pytest.approx(np.max(x / (x + 2)), rel=1e-10)
    assert rep.best_constant < 1


def test_dcheck_def_v2():
    rep = evaluate_condition(make_weight("v_alpha:2"), "Dcheck-def(K=2)")
    L = 1 - math.log1p(-default_r_grid()[-1])
    assert rep.best_constant == pytest.approx((L + math.log(2)) / L, rel=1e-8)
    assert rep.verdict == FAILS
    assert np.all(np.diff(rep.trend) <= 1e-12)


def test_m_def_constant():
    rep = evaluate_condition(make_weight("constant"), ConditionId("M-def", 2.0),
                             np.geomspace(1, 1e4, 100))
    assert rep.best_constant == pytest.approx(1.5, rel=1e-12)
    assert rep.witness == pytest.approx(1.0)


def test_rho_sequences():
    assert rho_sequence(make_weight("constant"), 2, 3) == pytest.approx([0, .5, .75, .875])
    assert rho_sequence(make_weight("power:1"), 4, 2) == pytest.approx([0, .5, .75])
    r = rho_sequence(make_weight("v_alpha:2"), math.e, 2)
    assert r == pytest.approx([0, 1 - math.exp(1 - math.e), 1 - math.exp(1 - math.e ** 2)],
                              rel=1e-12)


@pytest.mark.parametrize("spec", ["constant", "power:1", "v_alpha:3", "exponential:1"])
def test_rho_consistency(spec):
    w = make_weight(spec)
    K = 2.0
    r = rho_sequence(w, K, 20)
    keep = 1 - r > 1e-12
    t = w.tail(r[keep]) * K ** np.arange(21)[keep]
    # r itself is rounded, which costs about eps / (1 - r) relative
    tol = 1e-10 + 1e-15 / (1 - r[keep])
    assert keep.sum() >= 5
    assert np.all(np.abs(t / w.tail(0.0) - 1) < tol)


@pytest.mark.parametrize("spec, ratio", [("constant", 2.0), ("power:1", math.sqrt(2))])
def test_rho_ratio_constant_in_n(spec, ratio):
    r = rho_sequence(make_weight(spec), 2, 12)
    d = 1 - r
    assert d[:-1] / d[1:] == pytest.approx(np.full(12, ratio), rel=1e-9)


def test_classification_verdicts():
    def verdicts(spec):
        c = classify(make_weight(spec))
        return {k: v.verdict for k, v in c.classes.items()}

    assert set(verdicts("constant").values()) == {HOLDS}
    v = verdicts("v_alpha:2")
    assert (v["Dhat"], v["Dcheck"], v["D"]) == (HOLDS, FAILS, FAILS)
    e = verdicts("exponential:1")
    assert (e["Dhat"], e["M"]) == (FAILS, HOLDS)


@pytest.mark.parametrize("spec", ["constant", "power:2", "v_alpha:2", "exponential:1"])
def test_classification_consistency(spec):
    c = classify(make_weight(spec))
    assert all(c.consistency.values())


def test_dhat_def_at_least_one():
    for spec in ["constant", "power:2", "v_alpha:3", "exponential:1"]:
        assert evaluate_condition(make_weight(spec), "Dhat-def").best_constant >= 1


@pytest.mark.parametrize("tag", ["Dhat-def", "Dhat-ratio", "Dcheck-def", "Dcheck-ratio",
                                 "M-def", "M-moment"])
def test_scale_invariance(tag):
    w = make_weight("v_alpha:3")
    a = evaluate_condition(w, tag)
    b = evaluate_condition(scaled(w, 7.0), tag)
    assert b.best_constant == pytest.approx(a.best_constant, rel=1e-12)


def test_condition_parsing():
    assert ConditionId.parse("Dhat-ratio:2").param == 2.0
    assert ConditionId.parse("Dcheck-def(K=3)").param == 3.0
    with pytest.raises(SpecError):
        ConditionId("no-such-tag")
    with pytest.raises(SpecError):
        ConditionId("M-def", 0.5)
