"""Grid estimators for the weight classes D-hat, D-check, D and M.

Every condition is an inequality LHS <= C RHS (or LHS >= C RHS) that must
hold as r -> 1 or x -> infinity.  Finite grids cannot decide that, so each
report carries the extremal ratio, the grid point attaining it and the
ratios at the end of the grid; the verdict is "on-grid" and based on
whether the running extremum is still drifting over the last quarter of
the grid.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonIntegrableWeightError, SpecError
from .quadrature import accept_stalled, integrate_exp
from .weights import modify, r_to_u, tail_weight, u_to_r

HOLDS = "holds-on-grid"
FAILS = "fails-on-grid"
INCONCLUSIVE = "inconclusive"

# relative drift of the running extremum over the last quarter of the grid
# that is read as divergence (or as the margin collapsing to 1)
DRIFT_TOL = 0.05

BETA_PROBES = (0.25, 1.0, 4.0)


def default_r_grid():
    return -np.expm1(-np.arange(107) / 4 * math.log(2)) + 0.0


def default_x_grid():
    return np.geomspace(1.0, 1e4, 200)


# tag -> (parameter name, default, variable, kind)
# kind "sup": LHS/RHS bounded; "sup<1": bounded by a constant below 1;
# "inf": LHS/RHS bounded below by a constant above 1
_TAGS = {
    "Dhat-def": (None, None, "r", "sup"),
    "Dhat-ratio": ("beta", 1.0, "r", "sup"),
    "Dhat-moment": ("beta", 1.0, "x", "sup"),
    "Dhat-double": (None, None, "x", "sup"),
    "Dcheck-def": ("K", 2.0, "r", "inf"),
    "Dcheck-ratio": ("beta", 1.0, "r", "sup"),
    "Dcheck-int": ("gamma", 1.0, "r", "sup"),
    "Dcheck-rho": ("K", 2.0, "n", "sup"),
    "Dcheck-beta-tail": ("beta", 1.0, "r", "sup"),
    "Dcheck-beta-avg": ("beta", 1.0, "r", "sup<1"),
    "Dcheck-gamma-log": ("gamma", 1.0, "r", "sup"),
    "M-def": ("K", 2.0, "x", "inf"),
    "M-kernel": ("K", 2.0, "r", "sup"),
    "M-moment": ("beta", 1.0, "x", "sup"),
    "M-tailsum": ("gamma", 1.0, "x", "sup"),
    "M-tailmoment": ("beta", 0.0, "x", "sup"),
    "M-tailint": ("beta", 0.0, "x", "sup"),
    "Thm3-moment": ("q", 2.0, "x", "sup"),
}
TAGS = tuple(_TAGS)


@dataclass(frozen=True)
class ConditionId:
    """One class inequality with its parameter."""

    tag: str
    param: float = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise SpecError(f"unknown condition {self.tag!r}; expected one of {TAGS}")
        name, default, _, _ = _TAGS[self.tag]
        if name is None:
            if self.param is not None:
                raise SpecError(f"{self.tag} takes no parameter")
            return
        value = default if self.param is None else float(self.param)
        object.__setattr__(self, "param", value)
        ok = {
            "beta": value > 0 or (value >= 0 and self.tag in ("M-tailmoment", "M-tailint")),
            "gamma": value > 0,
            "K": value > 1,
            "q": value >= 1,
        }[name]
        if not (ok and math.isfinite(value)):
            raise SpecError(f"parameter {name}={value} out of range for {self.tag}")

    @property
    def variable(self):
        return _TAGS[self.tag][2]

    @property
    def kind(self):
        return _TAGS[self.tag][3]

    @property
    def param_name(self):
        return _TAGS[self.tag][0]

    def __str__(self):
        if self.param is None:
            return self.tag
        return f"{self.tag}({self.param_name}={self.param:g})"

    @classmethod
    def parse(cls, text):
        """Parse ``Dhat-ratio``, ``Dhat-ratio:2`` or ``Dhat-ratio(2)``."""
        text = text.strip()
        if text.endswith(")") and "(" in text:
            tag, _, arg = text[:-1].partition("(")
            arg = arg.split("=")[-1]
        else:
            tag, _, arg = text.partition(":")
        try:
            return cls(tag, float(arg) if arg else None)
        except ValueError:
            raise SpecError(f"malformed condition {text!r}") from None


@dataclass
class ClassConditionReport:
    condition: ConditionId
    grid: dict
    values: np.ndarray
    best_constant: float
    witness: float
    trend: list
    verdict: str

    def to_dict(self):
        return {
            "condition": str(self.condition),
            "tag": self.condition.tag,
            "param": self.condition.param,
            "kind": self.condition.kind,
            "grid": self.grid,
            "best_constant": self.best_constant,
            "witness": self.witness,
            "trend": list(self.trend),
            "verdict": self.verdict,
        }


# log-space integral helpers; their integrands are themselves quadrature
# results, so the outer tolerance sits above the inner noise floor

def _outer_cfg(cfg):
    return cfg.with_tol(max(1e3 * cfg.rel_tol, 1e-6))


def _cum_right(logF, nodes, cfg, what):
    """log of the integral of exp(logF) over [nodes[j], inf) for every j."""
    nodes = np.asarray(nodes, dtype=float)
    cfg = _outer_cfg(cfg)
    out = np.full(nodes.size, -np.inf)
    tail = integrate_exp(lambda s: logF(nodes[-1] + s), cfg)
    accept_stalled(tail, cfg, what)
    out[-1] = float(tail.value)
    if nodes.size > 1:
        seg = _segments(logF, nodes, cfg, what)
        for j in range(nodes.size - 2, -1, -1):
            out[j] = np.logaddexp(seg[j], out[j + 1])
    return out


def _cum_left(logF, nodes, start, cfg, what):
    """log of the integral of exp(logF) over [start, nodes[j]] for every j."""
    edges = np.concatenate([[start], np.asarray(nodes, dtype=float)])
    seg = _segments(logF, edges, cfg, what)
    return np.logaddexp.accumulate(seg)


def _segments(logF, edges, cfg, what):
    cfg = _outer_cfg(cfg)
    a = edges[:-1]
    width = np.diff(edges)
    pos = width > 0
    out = np.full(a.size, -np.inf)
    if not pos.any():
        return out
    a, width = a[pos], width[pos]

    def logf(t):
        return logF(a[:, None] + width[:, None] * t[None, :]) + np.log(width)[:, None]

    res = integrate_exp(logf, cfg, upper=1.0, probes=np.linspace(0.0, 1.0, 33))
    accept_stalled(res, cfg, what)
    out[pos] = np.asarray(res.value, dtype=float)
    return out


# individual conditions; each returns (grid points, log ratios)

def _lt(w, u):
    return np.asarray(w.log_tail_u(u), dtype=float)


def _lm(w, x):
    return np.asarray(w.log_moment(x), dtype=float)


def _safe_modify(w, x):
    return w if x == 0 else modify(w, x)


def _log_ratios(w, cond, grid):
    tag, b = cond.tag, cond.param
    cfg = w.cfg
    if cond.variable == "r":
        r = np.asarray(grid, dtype=float)
        u = r_to_u(r)
    else:
        x = np.asarray(grid, dtype=float)
        s = np.log(x)

    if tag == "Dhat-def":
        return _lt(w, u) - _lt(w, u + math.log(2))
    if tag in ("Dhat-ratio", "Dcheck-ratio"):
        h = _lt(w, u) + b * u
        if tag == "Dhat-ratio":
            return np.maximum.accumulate(h) - h
        return h - np.minimum.accumulate(h)
    if tag == "Dhat-moment":
        return b * s + _lm(modify(w, b), x) - _lm(w, x)
    if tag == "Dhat-double":
        return _lm(w, x) - _lm(w, 2 * x)
    if tag == "Dcheck-def":
        return _lt(w, u) - _lt(w, u + math.log(b))
    if tag == "Dcheck-int":
        cum = _cum_left(lambda v: -b * _lt(w, v), u, 0.0, cfg, str(cond))
        return b * _lt(w, u) + cum
    if tag == "Dcheck-beta-tail":
        return _lt(w, u) - b * u - _lt(modify(w, b), u)
    if tag == "Dcheck-beta-avg":
        num = _lt(_safe_modify(tail_weight(w), b - 1), u) + math.log(b)
        return num + b * u - _lt(w, u)
    if tag == "Dcheck-gamma-log":
        cum = _cum_right(lambda v: b * _lt(w, v), u, cfg, str(cond))
        return cum - b * _lt(w, u)
    if tag == "M-def":
        return _lm(w, x) - _lm(w, b * x)
    if tag == "M-kernel":
        t = r
        if np.any(t < 1 - 1 / b):
            raise DomainError(f"M-kernel needs t >= 1 - 1/K = {1 - 1 / b:g}")
        a = 1.0 / (b * (1 - t))
        return _lt(w, u) - np.asarray(w.log_partial_moment(a, t))
    if tag == "M-moment":
        return _lm(w, x) - b * s - _lm(modify(w, b), x)
    if tag == "M-tailsum":
        cum = _cum_right(lambda v: b * np.asarray(w.log_moment_s(v)), s, cfg, str(cond))
        return cum - b * _lm(w, x)
    if tag == "M-tailmoment":
        cum = _cum_right(lambda v: np.asarray(w.log_moment_s(v)) - b * v, s, cfg, str(cond))
        return cum + b * s - _lm(w, x)
    if tag == "M-tailint":
        return _lt(_safe_modify(tail_weight(w), b - 1), s) + b * s - _lm(w, x)
    if tag == "Thm3-moment":
        return _lm(_safe_modify(tail_weight(w), b - 2), x) - _lm(_safe_modify(w, b - 1), x)
    raise SpecError(f"condition {tag} has no grid evaluator")  # pragma: no cover


def _judge(kind, values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return INCONCLUSIVE
    if np.any(np.isnan(values)):
        return FAILS
    # an infinite ratio breaks an upper bound but satisfies a lower one
    if kind != "inf" and not np.all(np.isfinite(values)):
        return FAILS
    i75 = min(int(0.75 * (values.size - 1)), values.size - 1)
    if kind == "sup":
        run = np.maximum.accumulate(values)
        return FAILS if run[-1] > (1 + DRIFT_TOL) * run[i75] else HOLDS
    if kind == "sup<1":
        run = np.maximum.accumulate(values)
        if run[-1] >= 1:
            return FAILS
        return FAILS if 1 - run[-1] < (1 - DRIFT_TOL) * (1 - run[i75]) else HOLDS
    run = np.minimum.accumulate(values)
    if run[-1] <= 1:
        return FAILS
    return FAILS if run[-1] - 1 < (1 - DRIFT_TOL) * (run[i75] - 1) else HOLDS


def _grid_info(variable, grid):
    grid = np.asarray(grid, dtype=float)
    info = {"variable": variable, "count": int(grid.size),
            "min": float(grid[0]), "max": float(grid[-1])}
    if variable == "r":
        info["min_distance"] = float(1 - grid[-1])
    return info


def evaluate_condition(w, cond, grid=None):
    """Extremal ratio of one class inequality over ``grid``."""
    if isinstance(cond, str):
        cond = ConditionId.parse(cond)
    if cond.tag == "Dcheck-rho":
        return _evaluate_rho(w, cond, grid)
    if grid is None:
        grid = default_r_grid() if cond.variable == "r" else default_x_grid()
        if cond.tag == "M-kernel":
            grid = grid[grid >= 1 - 1 / cond.param]
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("condition grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("condition grid must be strictly increasing")
    if cond.variable == "r" and (grid[0] < 0 or grid[-1] >= 1):
        raise DomainError("r-grid must lie in [0, 1)")
    if cond.variable == "x" and grid[0] < 1 and cond.tag not in ("Dhat-moment", "Dhat-double"):
        raise DomainError("x-grid must lie in [1, inf)")
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            values = np.exp(_log_ratios(w, cond, grid))
    except NonIntegrableWeightError:
        values = np.full(grid.size, np.inf)
    return _report(cond, _grid_info(cond.variable, grid), grid, values)


def _report(cond, info, grid, values):
    values = np.where(np.isnan(values), np.inf, values)
    # ties (up to rounding) go to the smallest grid point
    if cond.kind == "inf":
        best = np.min(values)
        i = int(np.argmax(values <= best * (1 + 1e-12)))
    else:
        best = np.max(values)
        i = int(np.argmax(values >= best * (1 - 1e-12)))
    return ClassConditionReport(
        condition=cond, grid=info, values=values, best_constant=float(values[i]),
        witness=float(grid[i]), trend=[float(v) for v in values[-3:]],
        verdict=_judge(cond.kind, values))


def rho_sequence_u(w, K, N):
    """u_n = -log(1 - rho_n) with omega-hat(rho_n) = omega-hat(0) K**-n."""
    K = float(K)
    if not K > 1:
        raise DomainError("K must exceed 1")
    N = int(N)
    if N < 1:
        raise DomainError("N must be at least 1")
    lt0 = float(w.log_tail_u(0.0))
    n = np.arange(1, N + 1)
    target = lt0 - n * math.log(K)
    lo = np.zeros(N)
    hi = np.ones(N)
    for _ in range(200):
        above = np.asarray(w.log_tail_u(hi)) > target
        if not above.any():
            break
        hi = np.where(above, 2 * hi, hi)
        lo = np.where(above, hi / 2, lo)
    else:
        raise DomainError("rho_n bracket search failed; tail does not decay")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        above = np.asarray(w.log_tail_u(mid)) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        # stop at 1e-14 in r, or when the u-bracket hits float resolution
        if np.all(((hi - lo) * np.exp(-lo) < 1e-14) | (hi - lo <= 4 * np.spacing(hi))):
            break
    u = 0.5 * (lo + hi)
    lts = np.concatenate([[lt0], np.asarray(w.log_tail_u(u))])
    if np.any(np.diff(lts) >= 0):
        raise DomainError(f"tail of {w.label} is not strictly decreasing along rho_n; "
                          "bisection is unreliable")
    return np.concatenate([[0.0], u])


def rho_sequence(w, K, N):
    """rho_0 = 0 < rho_1 < ... < rho_N with omega-hat(rho_n) = omega-hat(0) K**-n."""
    return u_to_r(rho_sequence_u(w, K, N))


def _evaluate_rho(w, cond, grid):
    K = cond.param
    if grid is None:
        # enough points to reach 1 - 1e-8, capped where K^-n underflows
        lt_end = float(w.log_tail_u(r_to_u(default_r_grid()[-1])))
        n_max = int(math.ceil((float(w.log_tail_u(0.0)) - lt_end) / math.log(K))) + 1
        grid = np.arange(min(max(n_max, 2), 60))
    grid = np.asarray(grid, dtype=int)
    u = rho_sequence_u(w, K, int(grid[-1]) + 1)
    with np.errstate(over="ignore"):
        values = np.exp(u[grid + 1] - u[grid])
    info = {"variable": "n", "count": int(grid.size), "min": int(grid[0]), "max": int(grid[-1])}
    return _report(cond, info, grid, values)


# classification

DEFAULT_CHARACTERIZATIONS = {
    "Dhat": [("Dhat-def", [None]), ("Dhat-double", [None]),
             ("Dhat-moment", list(BETA_PROBES))],
    "Dcheck": [("Dcheck-def", [2.0]), ("Dcheck-ratio", list(BETA_PROBES)),
               ("Dcheck-gamma-log", [1.0]), ("Dcheck-beta-avg", [1.0])],
    "M": [("M-def", [2.0]), ("M-moment", [1.0]), ("M-tailsum", [1.0])],
}


@dataclass
class ClassVerdict:
    name: str
    verdict: str
    characterizations: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    @property
    def defining(self):
        return self.reports[0]

    def to_dict(self):
        return {"class": self.name, "verdict": self.verdict,
                "characterizations": dict(self.characterizations),
                "reports": [r.to_dict() for r in self.reports]}


@dataclass
class Classification:
    weight: str
    spec: dict
    classes: dict
    consistency: dict

    def verdict(self, name):
        return self.classes[name].verdict

    def to_dict(self):
        return {"weight": self.weight, "spec": self.spec,
                "classes": {k: v.to_dict() for k, v in self.classes.items()},
                "consistency": self.consistency}


def _combine(verdicts):
    if all(v == HOLDS for v in verdicts):
        return HOLDS
    if all(v == FAILS for v in verdicts):
        return FAILS
    return INCONCLUSIVE


def classify(w, r_grid=None, x_grid=None, characterizations=None):
    """Verdicts for D-hat, D-check, M and D with all reports attached.

    A characterization with several parameter probes ("for some beta")
    holds when any probe holds.  A class holds (fails) when all its
    characterizations hold (fail), and is inconclusive otherwise.
    """
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    x_grid = default_x_grid() if x_grid is None else np.asarray(x_grid, dtype=float)
    chars = DEFAULT_CHARACTERIZATIONS if characterizations is None else characterizations
    classes = {}
    for name, items in chars.items():
        reports, per_char = [], {}
        for tag, params in items:
            sub = []
            for param in params:
                cond = ConditionId(tag, param)
                grid = None if tag == "Dcheck-rho" else (r_grid if cond.variable == "r"
                                                         else x_grid)
                if tag == "M-kernel":
                    grid = grid[grid >= 1 - 1 / cond.param]
                rep = evaluate_condition(w, cond, grid)
                reports.append(rep)
                sub.append(rep.verdict)
            per_char[tag] = HOLDS if HOLDS in sub else (FAILS if all(
                v == FAILS for v in sub) else INCONCLUSIVE)
        classes[name] = ClassVerdict(name, _combine(list(per_char.values())), per_char, reports)
    if "Dhat" in classes and "Dcheck" in classes:
        dh, dc = classes["Dhat"].verdict, classes["Dcheck"].verdict
        if dh == HOLDS and dc == HOLDS:
            d = HOLDS
        elif FAILS in (dh, dc):
            d = FAILS
        else:
            d = INCONCLUSIVE
        classes["D"] = ClassVerdict("D", d, {"Dhat": dh, "Dcheck": dc}, [])
    consistency = {}
    if "D" in classes and "M" in classes:
        # D = Dhat & Dcheck = Dhat & M, so the M route must give the same verdict
        dh, m = classes["Dhat"].verdict, classes["M"].verdict
        via_m = HOLDS if (dh == HOLDS and m == HOLDS) else (
            FAILS if FAILS in (dh, m) else INCONCLUSIVE)
        consistency["D_via_M_agrees"] = via_m == classes["D"].verdict
        if dh == HOLDS:
            consistency["M_agrees_with_Dcheck_given_Dhat"] = m == classes["Dcheck"].verdict
    return Classification(w.label, w.spec.to_dict(), classes, consistency)
