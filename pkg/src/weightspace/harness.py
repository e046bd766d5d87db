"""Comparability and divergence experiments for the weighted-norm estimates.

An experiment evaluates two quantities (both as p-th powers) on a family
of (function, weight, p, q) tuples and reports the bracket of their ratio.
A tuple on which both sides are infinite is skipped, and one on which only
the left side is infinite is recorded as a violation.  Default families
are filtered by the hypotheses of the statement; an explicit family that
violates them is rejected with HypothesisError.

A divergence scenario evaluates both sides of a failing estimate on
[0, 1 - eps] for a decreasing sweep of eps and reports the ratio trend.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConvergenceError, DomainError, HypothesisError,
                     NonIntegrableWeightError, SpecError)
from .functionals import (bergman_norm, coeff_functional, dirichlet_norm, h_class_norm,
                          i_functional, j_functional, s_class_norm)
from .functions import FunctionSpec, derivative, make_function
from .quadrature import QuadratureConfig, integrate_interval
from .weight_classes import FAILS, HOLDS, classify
from .weights import WeightSpec, make_weight, modify, tail_weight

DEFAULT_FUNCTIONS = ("monomial:1", "monomial:2", "monomial:4", "monomial:8", "log_map", "koebe")
DEFAULT_WEIGHTS = ("constant", "power:1", "power:2", "v_alpha:3")
DEFAULT_EPSILONS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
# log-type divergences grow slowly over eps in (1e-8, 1e-2); a convergent
# control moves by a few percent
GROWTH_FACTOR = 1.25
# exact coefficient sums run to this index; beyond it the sum is an integral
_EXACT_TERMS = 4096


# ----- reports ------------------------------------------------------------------------


@dataclass
class ComparabilityReport:
    experiment: str
    pair: str
    lhs: str
    rhs: str
    config: dict
    tuples: list
    skipped: list = field(default_factory=list)
    excluded: list = field(default_factory=list)

    @property
    def ratios(self):
        return [t["ratio"] for t in self.tuples]

    @property
    def min_ratio(self):
        return min(self.ratios) if self.tuples else math.nan

    @property
    def max_ratio(self):
        return max(self.ratios) if self.tuples else math.nan

    @property
    def spread(self):
        return self.max_ratio / self.min_ratio if self.tuples else math.nan

    @property
    def violations(self):
        return [s for s in self.skipped if s.get("violation")]

    def to_dict(self):
        return {"experiment": self.experiment, "pair": self.pair, "lhs": self.lhs,
                "rhs": self.rhs, "config": self.config, "tuples": self.tuples,
                "min_ratio": self.min_ratio, "max_ratio": self.max_ratio,
                "spread": self.spread, "skipped": self.skipped, "excluded": self.excluded}


@dataclass
class DivergenceReport:
    scenario: str
    config: dict
    lhs: str
    rhs: str
    epsilons: list
    lhs_partial: list
    rhs_partial: list

    @property
    def ratio_trend(self):
        return [a / b for a, b in zip(self.lhs_partial, self.rhs_partial)]

    @property
    def growth(self):
        t = self.ratio_trend
        return t[-1] / t[0]

    @property
    def monotone(self):
        t = self.ratio_trend
        return all(b >= a * (1 - 1e-9) for a, b in zip(t, t[1:]))

    @property
    def verdict(self):
        if self.monotone and self.growth >= GROWTH_FACTOR:
            return "ratio-grows"
        return "ratio-stable"

    def to_dict(self):
        return {"scenario": self.scenario, "config": self.config, "lhs": self.lhs,
                "rhs": self.rhs, "epsilons": self.epsilons, "lhs_partial": self.lhs_partial,
                "rhs_partial": self.rhs_partial, "ratio_trend": self.ratio_trend,
                "growth": self.growth, "verdict": self.verdict}


# ----- hypotheses ---------------------------------------------------------------------

_verdicts = {}
# derived weights are judged by the defining conditions alone; the other
# characterizations would nest tail quadratures three deep
_DEFINING = {"Dhat": [("Dhat-def", [None])], "Dcheck": [("Dcheck-def", [2.0])]}


def _verdict(w, name, defining=False):
    key = (json.dumps(w.spec.to_dict(), sort_keys=True), name, defining)
    if key not in _verdicts:
        chars = _DEFINING if defining else None
        _verdicts[key] = classify(w, characterizations=chars).verdict(name)
    return _verdicts[key]


def _in_class(w, name, defining=False):
    # inconclusive verdicts are let through; only a measured failure rejects
    return _verdict(w, name, defining) != FAILS


def _hat_modified(w, x):
    """omega-hat_[x], or None when it is not integrable."""
    try:
        return modify(tail_weight(w), x)
    except NonIntegrableWeightError:
        return None


def _hat_modified_in_dhat(w, x, allow_non_l1):
    # for x > -1 the class of omega-hat_[x] in Dhat is that of omega
    if x > -1:
        return _in_class(w, "Dhat")
    v = _hat_modified(w, x)
    if v is None:
        return allow_non_l1
    return _in_class(v, "Dhat", defining=True)


def _flag(f, name):
    return f.has_flag(name)


# ----- sides --------------------------------------------------------------------------


def _f0(f, p):
    return abs(f.coeffs[0]) ** p


def _coeff_value(f, p, w, variant, cfg):
    res = coeff_functional(f, p, w, variant, cfg)
    if not math.isfinite(res.err_est):
        raise ConvergenceError("coefficient sum diverges")
    return res.value


SIDES = {
    "A_om[q-1]": ("||f||^p in A^p(omega_[q-1])",
                  lambda f, w, p, q, c: bergman_norm(f, p, modify(w, q - 1), c).value),
    "A_hat[q-2]": ("||f||^p in A^p(omega-hat_[q-2])",
                   lambda f, w, p, q, c: bergman_norm(f, p, _need(_hat_modified(w, q - 2)),
                                                      c).value),
    "H": ("||f||^p in H^p_omega + |f(0)|^p",
          lambda f, w, p, q, c: h_class_norm(f, p, w, c).value + _f0(f, p)),
    "H0": ("||f||^p in H^p_omega",
           lambda f, w, p, q, c: h_class_norm(f, p, w, c).value),
    "S": ("||f||^p in S^p_omega + |f(0)|^p",
          lambda f, w, p, q, c: s_class_norm(f, p, w, c).value + _f0(f, p)),
    "S0": ("||f||^p in S^p_omega",
           lambda f, w, p, q, c: s_class_norm(f, p, w, c).value),
    "J": ("J^p_omega(f)", lambda f, w, p, q, c: j_functional(f, p, w, c).value),
    "f'_hat[p-2]": ("||f'||^p in A^p(omega-hat_[p-2])",
                    lambda f, w, p, q, c: bergman_norm(derivative(f), p,
                                                       _need(_hat_modified(w, p - 2)), c).value),
    "D_om[p-1]": ("||f||^p in D^p(omega_[p-1])",
                  lambda f, w, p, q, c: dirichlet_norm(f, p, modify(w, p - 1), c).value),
    "D_hat[p-2]": ("||f||^p in D^p(omega-hat_[p-2])",
                   lambda f, w, p, q, c: dirichlet_norm(f, p, _need(_hat_modified(w, p - 2)),
                                                        c).value),
    "D_om": ("||f||^p in D^p_omega", lambda f, w, p, q, c: dirichlet_norm(f, p, w, c).value),
    "I": ("I_{p,q,omega}(f) + |f(0)|^p",
          lambda f, w, p, q, c: i_functional(f, p, q, w, c).value + _f0(f, p)),
    "coeff_k": ("sum |a_k|^p (k+1)^(p-1) omega_k",
                lambda f, w, p, q, c: _coeff_value(f, p, w, "omega_k", c)),
    "coeff_2k": ("sum_{k>=1} |a_k|^p k^(p-1) omega_2k",
                 lambda f, w, p, q, c: _coeff_value(f, p, w, "omega_2k", c)),
}


def _need(w):
    if w is None:
        raise NonIntegrableWeightError("modified tail weight is not integrable")
    return w


# ----- experiments --------------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    """Sides per pair, default p and q, and a per-tuple hypothesis check.

    ``check(f, w, p, q)`` returns None when the tuple is admissible and
    otherwise (kind, hypothesis) with kind one of param, function, weight.  ``pairs`` maps a pair name to the
    (lhs, rhs) side keys; it may depend on p through ``pairs_for``.
    """

    pairs: dict
    p: tuple
    q: tuple = (2.0,)
    check: object = None
    pairs_for: object = None

    def sides(self, pair, p):
        table = self.pairs_for(p) if self.pairs_for is not None else self.pairs
        return table[pair]


def _t1(f, w, p, q):
    if not _hat_modified_in_dhat(w, q - 2, allow_non_l1=True):
        return ("weight", "omega-hat_[q-2] in Dhat or not integrable")
    return None


def _t2(f, w, p, q):
    if q < 1:
        if _hat_modified(w, q - 2) is None:
            return ("weight", "omega-hat_[q-2] integrable")
        if not _hat_modified_in_dhat(w, q - 2, allow_non_l1=False):
            return ("weight", "omega-hat_[q-2] in Dhat (q < 1)")
    elif q == 1:
        v = _hat_modified(w, -1.0)
        if v is None:
            return ("weight", "omega-hat_[-1] integrable")
        if not _in_class(v, "D", defining=True):
            return ("weight", "omega-hat_[-1] in D (q = 1)")
    elif not _in_class(w, "D"):
        return ("weight", "omega in D (q > 1)")
    return None


def _t3(f, w, p, q):
    if p != 2:
        return ("param", "p = 2")
    if q < 1:
        return ("param", "q >= 1")
    if not _in_class(w, "M"):
        return ("weight", "omega in M")
    return None


def _t4i(f, w, p, q):
    if not p < 2:
        return ("param", "0 < p < 2")
    if _flag(f, "class_S"):
        return None
    if not _hat_modified_in_dhat(w, p - 2, allow_non_l1=True):
        return ("weight", "omega-hat_[p-2] in Dhat or not integrable, unless f in S")
    return None


def _t4ii(f, w, p, q):
    if not p > 2:
        return ("param", "2 < p < infinity")
    if _flag(f, "class_S"):
        return None
    if not _in_class(w, "Dhat"):
        return ("weight", "omega in Dhat, unless f in S")
    return None


def _t5(f, w, p, q):
    if not _flag(f, "univalent"):
        return ("function", "f univalent")
    if not _in_class(w, "D"):
        return ("weight", "omega in D")
    return None


def _t6(f, w, p, q):
    if not (p >= 2 and q >= 2):
        return ("param", "2 <= p, q < infinity")
    if not _flag(f, "univalent"):
        return ("function", "f univalent")
    if not _in_class(w, "D"):
        return ("weight", "omega in D")
    return None


def _t7(f, w, p, q):
    if p < 1:
        return ("param", "1 <= p")
    if p <= 2 and not (_flag(f, "univalent") or _flag(f, "close_to_convex")):
        return ("function", "f univalent or close-to-convex")
    if p > 2 and not _flag(f, "close_to_convex"):
        return ("function", "f close-to-convex when p > 2")
    if not _in_class(w, "D"):
        return ("weight", "omega in D")
    return None


def _p61(f, w, p, q):
    if p < 1:
        if _flag(f, "class_S") or _in_class(w, "Dhat"):
            return None
        return ("weight", "f in S, or omega in Dhat (p < 1)")
    if p == 1:
        return None
    if not _in_class(w, "Dcheck"):
        return ("weight", "omega in Dcheck (p > 1)")
    return None


def _p61_pairs(p):
    if p < 1:
        return {"J/f'": ("J", "f'_hat[p-2]")}
    if p == 1:
        return {"J/f'": ("J", "D_om")}
    return {"J/f'": ("J", "D_om[p-1]")}


def _l64(f, w, p, q):
    if not _in_class(w, "D"):
        return ("weight", "omega in D")
    return None


def _l64_pairs(p):
    return {"S/H": ("S0", "H0")} if p <= 2 else {"S/H": ("H0", "S0")}


def _in_m(f, w, p, q):
    if not _in_class(w, "M"):
        return ("weight", "omega in M")
    return None


def _l65_pairs(p):
    return {"coeff/S": ("coeff_2k", "S0")} if p <= 2 else {"coeff/S": ("S0", "coeff_2k")}


def _l73(f, w, p, q):
    if not p > 1:
        return ("param", "1 < p")
    return _in_m(f, w, p, q)


def _p75(f, w, p, q):
    if not _hat_modified_in_dhat(w, p - 2, allow_non_l1=False):
        return ("weight", "omega-hat_[p-2] in Dhat")
    return None


def _p75_pairs(p):
    if p <= 2:
        return {"coeff/f'": ("coeff_k", "f'_hat[p-2]")}
    return {"coeff/f'": ("f'_hat[p-2]", "coeff_k")}


EXPERIMENTS = {
    "T1": Experiment({"A": ("A_om[q-1]", "A_hat[q-2]")}, (1.0, 2.0), (0.5, 2.0), _t1),
    "T2": Experiment({"A": ("A_hat[q-2]", "A_om[q-1]")}, (1.0, 2.0), (2.0,), _t2),
    "T3": Experiment({"A": ("A_hat[q-2]", "A_om[q-1]")}, (2.0,), (1.0, 2.0), _t3),
    "T4i": Experiment({"H/f'": ("H0", "f'_hat[p-2]")}, (1.0, 1.5), check=_t4i),
    "T4ii": Experiment({"f'/H": ("f'_hat[p-2]", "H0")}, (3.0,), check=_t4ii),
    "T5": Experiment({"H/J": ("H", "J"), "S/J": ("S", "J")}, (1.0, 2.0, 3.0), check=_t5),
    "T6": Experiment({"D_om/J": ("D_om[p-1]", "J"), "D_hat/J": ("D_hat[p-2]", "J"),
                      "I/J": ("I", "J")}, (2.0, 3.0), (2.0, 3.0), _t6),
    "T7": Experiment({"J/coeff": ("J", "coeff_k")}, (1.0, 1.5, 2.0), check=_t7),
    "P6.1": Experiment({"J/f'": None}, (0.5, 1.0, 2.0), check=_p61, pairs_for=_p61_pairs),
    "L6.4": Experiment({"S/H": None}, (1.0, 3.0), check=_l64, pairs_for=_l64_pairs),
    "L6.5": Experiment({"coeff/S": None}, (1.0, 3.0), check=_in_m, pairs_for=_l65_pairs),
    "L7.3": Experiment({"J/coeff": ("J", "coeff_k")}, (1.5, 3.0), check=_l73),
    "P7.5": Experiment({"coeff/f'": None}, (1.0, 3.0), check=_p75, pairs_for=_p75_pairs),
}


def _as_list(v, cast):
    if v is None:
        return None
    if isinstance(v, (list, tuple)):
        return [cast(x) for x in v]
    return [cast(v)]


def _cfg_from(config):
    tol = config.get("tol")
    cfg = QuadratureConfig.default()
    return cfg if tol is None else cfg.with_tol(float(tol))


def _evaluate(job):
    f, w, p, q, lkey, rkey, cfg = job
    row = {"function": f.spec.to_dict(), "function_label": f.label,
           "weight": w.spec.to_dict(), "weight_label": w.label, "p": p, "q": q}
    sides = {}
    for name, key in (("lhs", lkey), ("rhs", rkey)):
        try:
            sides[name] = float(SIDES[key][1](f, w, p, q, cfg))
        except ConvergenceError as exc:
            if "diverg" not in str(exc):
                raise
            sides[name] = math.inf
        except NonIntegrableWeightError:
            sides[name] = math.inf
    lhs, rhs = sides["lhs"], sides["rhs"]
    row.update(lhs=lhs, rhs=rhs)
    if math.isinf(lhs) or math.isinf(rhs) or rhs == 0:
        if math.isinf(lhs) and math.isinf(rhs):
            row["reason"] = "both sides infinite"
        elif math.isinf(rhs):
            row["reason"] = "rhs infinite"
        elif lhs == 0 and rhs == 0:
            row["reason"] = "both sides zero"
        else:
            row["reason"] = "lhs infinite while rhs finite" if math.isinf(lhs) \
                else "rhs zero while lhs positive"
            row["violation"] = True
        return row, False
    row["ratio"] = lhs / rhs
    return row, True


def run_comparability(experiment, config=None):
    """Bracket of lhs/rhs for one experiment over a function/weight/p/q family.

    ``config`` keys (all optional): functions, weights, p, q, pair, tol, workers,
    check.  With ``check`` false, tuples outside the hypotheses are evaluated
    anyway and tagged with the hypothesis they violate.
    """
    if experiment not in EXPERIMENTS:
        raise SpecError(f"unknown experiment {experiment!r}; expected one of "
                        f"{sorted(EXPERIMENTS)}")
    exp = EXPERIMENTS[experiment]
    config = dict(config or {})
    cfg = _cfg_from(config)
    pair = config.get("pair") or next(iter(exp.pairs))
    if pair not in exp.pairs:
        raise SpecError(f"{experiment} has pairs {list(exp.pairs)}, not {pair!r}")
    explicit_f = config.get("functions") is not None
    explicit_w = config.get("weights") is not None
    fspecs = [FunctionSpec.coerce(s) for s in (config.get("functions") or DEFAULT_FUNCTIONS)]
    wspecs = [WeightSpec.coerce(s) for s in (config.get("weights") or DEFAULT_WEIGHTS)]
    ps = _as_list(config.get("p"), float) or list(exp.p)
    qs = _as_list(config.get("q"), float) or list(exp.q)
    for v in ps + qs:
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"p and q must be positive and finite, got {v}")
    fs = [make_function(s) for s in fspecs]
    ws = [make_weight(s, cfg=cfg) for s in wspecs]

    check = bool(config.get("check", True))
    jobs, excluded, outside = [], [], {}
    for p in ps:
        lkey, rkey = exp.sides(pair, p)
        for q in qs:
            for w in ws:
                for f in fs:
                    why = exp.check(f, w, p, q) if exp.check else None
                    if why is None or not check:
                        if why is not None:
                            outside[len(jobs)] = why[1]
                        jobs.append((f, w, p, q, lkey, rkey, cfg))
                        continue
                    kind, text = why
                    if kind == "param" or (explicit_f if kind == "function" else explicit_w):
                        raise HypothesisError(text, f"{experiment}: f={f.label}, "
                                              f"omega={w.label}, p={p:g}, q={q:g}")
                    excluded.append({"function": f.label, "weight": w.label, "p": p, "q": q,
                                     "hypothesis": why[1]})
    workers = int(config.get("workers", 1))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(_evaluate, jobs))
    else:
        results = [_evaluate(j) for j in jobs]
    for i, text in outside.items():
        results[i][0]["outside_hypothesis"] = text
    tuples = [row for row, ok in results if ok]
    skipped = [row for row, ok in results if not ok]
    lhs_keys = sorted({exp.sides(pair, p)[0] for p in ps})
    rhs_keys = sorted({exp.sides(pair, p)[1] for p in ps})
    report_cfg = {"functions": [s.to_dict() for s in fspecs],
                  "weights": [s.to_dict() for s in wspecs], "p": ps, "q": qs,
                  "pair": pair, "rel_tol": cfg.rel_tol, "check": check}
    return ComparabilityReport(experiment, pair, " | ".join(SIDES[k][0] for k in lhs_keys),
                               " | ".join(SIDES[k][0] for k in rhs_keys), report_cfg,
                               tuples, skipped, excluded)


# ----- divergence scenarios -----------------------------------------------------------


def _alpha_window(p, lo, hi):
    if not lo < hi:
        raise HypothesisError(f"an admissible alpha in ({lo:g}, {hi:g}]", f"p={p:g}")
    return 0.5 * (lo + hi)


def _default_alpha(scenario, p):
    if scenario in ("T4ii-fail", "L6.3-fail"):
        return p + 1
    if scenario == "L6.4-fail":
        # S diverges and H converges iff p < alpha <= 1 + p/2 (p < 2);
        # H diverges and S converges iff 1 + p/2 < alpha <= p (p > 2)
        lo, hi = (p, 1 + p / 2) if p < 2 else (1 + p / 2, p)
        return _alpha_window(p, max(lo, 1.0), hi)
    # L6.5: alpha between 2 and 1 + p/2
    lo, hi = sorted((2.0, 1 + p / 2))
    return _alpha_window(p, max(lo, 1.0), hi)


def _log_map_coeff_sum(w, p, K, cfg):
    """sum over 1 <= k <= K of |a_k|^p k^(p-1) omega_2k for a_k = 1/k.

    The terms reduce to omega_2k / k; the first 4096 are summed exactly and
    the rest by quadrature of the same expression in log k.
    """
    n = min(int(K), _EXACT_TERMS)
    k = np.arange(1, n + 1, dtype=float)
    total = float(np.sum(np.exp(w.log_moment(2 * k) - np.log(k))))
    if K > n:
        def g(t):
            kk = np.exp(t)
            return np.exp(w.log_moment(2 * kk))

        total += float(integrate_interval(g, math.log(n + 0.5), math.log(K + 0.5), cfg).value)
    return total


def _scenario_sides(scenario, p, alpha):
    f = make_function("log_map")
    w = make_weight(WeightSpec("log_power", {"alpha": alpha}))
    if scenario == "T4ii-fail":
        wd = modify(w, p - 1)
        return f, w, ("J^p_omega(f) on [0, 1-eps]",
                      lambda c, R: j_functional(f, p, w, c, upper=R).value), \
            ("||f||^p in D^p(omega_[p-1]) on D(0, 1-eps)",
             lambda c, R: dirichlet_norm(f, p, wd, c, upper=R).value)
    if scenario == "L6.3-fail":
        return f, w, ("J^p_omega(f) on [0, 1-eps]",
                      lambda c, R: j_functional(f, p, w, c, upper=R).value), \
            ("||f||^p in S^p_omega on [0, 1-eps]",
             lambda c, R: s_class_norm(f, p, w, c, upper=R).value)
    s_side = ("||f||^p in S^p_omega on [0, 1-eps]",
              lambda c, R: s_class_norm(f, p, w, c, upper=R).value)
    if scenario == "L6.4-fail":
        h_side = ("||f||^p in H^p_omega on D(0, 1-eps)",
                  lambda c, R: h_class_norm(f, p, w, c, upper=R).value)
        return (f, w, s_side, h_side) if p < 2 else (f, w, h_side, s_side)
    c_side = ("sum_{1 <= k <= 1/eps} |a_k|^p k^(p-1) omega_2k",
              lambda c, R: _log_map_coeff_sum(w, p, 1.0 / (1.0 - R), c))
    return (f, w, c_side, s_side) if p < 2 else (f, w, s_side, c_side)


SCENARIOS = {"T4ii-fail": 3.0, "L6.3-fail": 1.0, "L6.4-fail": 3.0, "L6.5-fail": 1.0}


def run_divergence(scenario, p=None, epsilons=None, cfg=None, *, alpha=None):
    """Both sides of a failing estimate for f = log_map and omega = v_alpha on [0, 1-eps].

    The left side is the one expected to blow up; ``alpha`` defaults to the
    choice that makes exactly one side diverge.
    """
    if scenario not in SCENARIOS:
        raise SpecError(f"unknown scenario {scenario!r}; expected one of {sorted(SCENARIOS)}")
    p = SCENARIOS[scenario] if p is None else float(p)
    if not (p > 0 and math.isfinite(p)):
        raise DomainError(f"p must be positive and finite, got {p}")
    if scenario in ("L6.4-fail", "L6.5-fail") and p == 2:
        raise HypothesisError("p != 2", scenario)
    eps = [float(e) for e in (DEFAULT_EPSILONS if epsilons is None else epsilons)]
    if not eps or any(not 1e-9 < e < 1e-1 for e in eps):
        raise DomainError("epsilons must lie in (1e-9, 1e-1)")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("epsilons must be strictly decreasing")
    alpha = _default_alpha(scenario, p) if alpha is None else float(alpha)
    if not alpha > 1:
        raise DomainError(f"v_alpha needs alpha > 1, got {alpha}")
    cfg = cfg or QuadratureConfig.default()
    f, w, (lname, lhs), (rname, rhs) = _scenario_sides(scenario, p, alpha)
    lv, rv = [], []
    for e in eps:
        R = 1.0 - e
        lv.append(float(lhs(cfg, R)))
        rv.append(float(rhs(cfg, R)))
    config = {"p": p, "alpha": alpha, "function": f.spec.to_dict(),
              "weight": w.spec.to_dict(), "rel_tol": cfg.rel_tol}
    return DivergenceReport(scenario, config, lname, rname, eps, lv, rv)


__all__ = ["ComparabilityReport", "DivergenceReport", "EXPERIMENTS", "SCENARIOS",
           "run_comparability", "run_divergence", "HOLDS", "FAILS"]
