import math

import pytest

from weightspace.errors import DomainError, HypothesisError, SpecError
from weightspace.harness import (EXPERIMENTS, SCENARIOS, run_comparability, run_divergence)

MONOMIALS = ["monomial:1", "monomial:2", "monomial:4", "monomial:8"]


@pytest.mark.parametrize("pair", ["H/J", "S/J"])
def test_t5_monomial_ratios(pair):
    # m_n is not univalent for n > 1 and v_3 is not in D; the identities hold regardless
    rep = run_comparability("T5", {"functions": MONOMIALS, "pair": pair, "p": [1, 2, 3],
                                   "check": False})
    assert len(rep.tuples) == 4 * 4 * 3
    outside = [t for t in rep.tuples if "outside_hypothesis" in t]
    assert len(outside) == 3 * 4 * 3 + 3
    for t in rep.tuples:
        n, p = t["function"]["params"]["n"], t["p"]
        want = 2 * math.pi * n * p if pair == "H/J" else (math.pi * n) ** (p / 2)
        assert t["ratio"] == pytest.approx(want, rel=1e-6)


def test_t2_monomials_bounded():
    rep = run_comparability("T2", {"functions": MONOMIALS, "weights": ["power:1"], "p": [2],
                                   "q": [2]})
    assert len(rep.tuples) == 4
    assert all(0 < t["ratio"] < math.inf for t in rep.tuples)
    assert rep.spread < 100


def test_t6_gating():
    with pytest.raises(HypothesisError) as exc:
        run_comparability("T6", {"p": [1]})
    assert "2 <= p" in str(exc.value) or "p" in exc.value.hypothesis
    with pytest.raises(HypothesisError) as exc:
        run_comparability("T6", {"weights": ["v_alpha:3"], "p": [2]})
    assert "D" in exc.value.hypothesis
    with pytest.raises(HypothesisError):
        run_comparability("T6", {"functions": ["monomial:2"], "p": [2]})
    rep = run_comparability("T6", {"functions": ["monomial:1"], "weights": ["power:1"],
                                   "p": [2], "q": [2], "pair": "I/J"})
    assert len(rep.tuples) == 1


def test_default_family_filtering():
    rep = run_comparability("T6", {"functions": ["monomial:1"], "p": [2], "q": [2]})
    assert {e["weight"] for e in rep.excluded} == {"v_3"}
    assert all(t["weight_label"] != "v_3" for t in rep.tuples)


def test_report_provenance():
    rep = run_comparability("T1", {"functions": ["monomial:2"], "weights": ["power:2"],
                                   "p": [1], "q": [2]})
    d = rep.to_dict()
    assert d["config"]["functions"] == [{"family": "monomial", "params": {"n": 2},
                                         **{k: v for k, v in d["config"]["functions"][0].items()
                                            if k not in ("family", "params")}}]
    t = d["tuples"][0]
    assert t["weight"]["family"] == "power"
    assert d["spread"] == pytest.approx(1.0)
    assert d["min_ratio"] == d["max_ratio"] == t["ratio"]


def test_bad_configs():
    with pytest.raises(SpecError):
        run_comparability("T99")
    with pytest.raises(SpecError):
        run_comparability("T5", {"pair": "X/Y"})
    with pytest.raises(DomainError):
        run_comparability("T1", {"p": [-1]})


def test_every_experiment_has_pairs():
    assert set(EXPERIMENTS) == {"T1", "T2", "T3", "T4i", "T4ii", "T5", "T6", "T7", "P6.1",
                                "L6.4", "L6.5", "L7.3", "P7.5"}
    for exp in EXPERIMENTS.values():
        assert exp.pairs


def test_workers_do_not_change_results():
    cfg = {"functions": ["monomial:1", "log_map"], "weights": ["power:1", "constant"],
           "p": [2]}
    a = run_comparability("T5", cfg).to_dict()
    b = run_comparability("T5", {**cfg, "workers": 4}).to_dict()
    assert a == b


def test_t4ii_divergence():
    rep = run_divergence("T4ii-fail")
    assert rep.config["alpha"] == 4
    assert rep.monotone
    assert rep.growth >= 3
    assert rep.verdict == "ratio-grows"


def test_l63_divergence_and_control():
    rep = run_divergence("L6.3-fail", 1)
    assert rep.monotone and rep.verdict == "ratio-grows"
    # the partial J side is log(1+U) + 1/(1+U) - 1 with U = log(1/eps)
    for e, v in zip(rep.epsilons, rep.lhs_partial):
        U = -math.log(e)
        assert v == pytest.approx(math.log1p(U) + 1 / (1 + U) - 1, rel=1e-6)
    ctl = run_divergence("L6.3-fail", 1, [1e-2, 1e-5, 1e-8], alpha=4)
    assert ctl.verdict == "ratio-stable"
    assert abs(ctl.growth - 1) < 0.5


def test_scenario_windows():
    assert set(SCENARIOS) == {"T4ii-fail", "L6.3-fail", "L6.4-fail", "L6.5-fail"}
    assert run_divergence("L6.4-fail", 1, [1e-2, 1e-4]).config["alpha"] == pytest.approx(1.25)
    assert run_divergence("L6.5-fail", 3, [1e-2, 1e-4]).config["alpha"] == pytest.approx(2.25)
    with pytest.raises(HypothesisError):
        run_divergence("L6.4-fail", 2)


def test_epsilon_validation():
    for bad in ([1e-2, 1e-2], [1e-3, 1e-2], [0.5], [1e-10], []):
        with pytest.raises(DomainError):
            run_divergence("L6.3-fail", 1, bad)
    with pytest.raises(DomainError):
        run_divergence("L6.3-fail", 1, alpha=1.0)
