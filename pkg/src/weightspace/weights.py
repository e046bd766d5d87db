"""Radial weights and the quantities derived from them.

A weight is stored through phi(u) = log(omega(r) (1 - r)) with
u = -log(1 - r), so that omega(r) dr = exp(phi(u)) du.  Tails, moments
and the derived weights omega_[x], omega-hat and omega-tilde are all
computed from phi in log space, which keeps super-exponentially small
tails (exp(-c/(1-r))) and slowly decaying log-power tails equally
accurate down to 1 - r ~ 1e-300.
"""

import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError, NonIntegrableWeightError, SpecError
from .quadrature import QuadratureConfig, accept_stalled, integrate_exp

FAMILIES = ("constant", "power", "log_power", "exponential", "tabulated", "derived")
TRANSFORMS = ("modify", "hat", "tilde", "scale")
_ALIASES = {"v_alpha": "log_power", "v": "log_power", "exp": "exponential",
            "one": "constant", "1": "constant"}


def r_to_u(r):
    return -np.log1p(-np.asarray(r, dtype=float))


def u_to_r(u):
    return -np.expm1(-np.asarray(u, dtype=float))


def _log_neg_log1m(u):
    """log(-log(r)) at r = 1 - exp(-u), accurate for large u."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        near = np.log(-np.log1p(-np.exp(-u)))
        far = -u + 0.5 * np.exp(-u)
    return np.where(u > 30, far, near)


def _log_expn2(z):
    """log E_2(z) for z > 0, asymptotic series beyond z = 50."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z <= 50
    with np.errstate(divide="ignore"):
        out[small] = np.log(special.expn(2, z[small]))
    zl = z[~small]
    if zl.size:
        k = np.arange(20)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            terms = ((-1.0) ** k)[:, None] * np.exp(
                special.gammaln(k + 2)[:, None] - (k[:, None] + 1) * np.log(zl))
            out[~small] = -zl + np.log(terms.sum(axis=0))
    return out


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Serializable description ``{family, params}`` of a weight."""

    family: str
    params: dict = field(default_factory=dict)

    def to_dict(self):
        params = dict(self.params)
        if "base" in params and isinstance(params["base"], WeightSpec):
            params["base"] = params["base"].to_dict()
        return {"family": self.family, "params": params}

    def __eq__(self, other):
        return isinstance(other, WeightSpec) and self.to_dict() == other.to_dict()

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "family" not in d:
            raise SpecError(f"weight spec needs a 'family' field: {d!r}")
        family = _ALIASES.get(d["family"], d["family"])
        if family not in FAMILIES:
            raise SpecError(f"unknown weight family {d['family']!r}")
        params = dict(d.get("params", {}))
        if family == "derived":
            params["base"] = cls.coerce(params.get("base"))
        return cls(family, params)

    @classmethod
    def parse(cls, text):
        """Parse ``family[:param]``, inline JSON or ``@file.json``."""
        text = text.strip()
        if text.startswith("@"):
            try:
                with open(text[1:]) as fh:
                    return cls.from_dict(json.load(fh))
            except OSError as exc:
                raise SpecError(f"cannot read weight spec file: {exc}") from None
        if text.startswith("{"):
            try:
                return cls.from_dict(json.loads(text))
            except json.JSONDecodeError as exc:
                raise SpecError(f"malformed weight JSON: {exc}") from None
        name, _, arg = text.partition(":")
        family = _ALIASES.get(name, name)
        try:
            if family == "constant":
                return cls("constant", {} if not arg else {"scale": float(arg)})
            if family in ("power", "log_power"):
                return cls(family, {"alpha": float(arg)})
            if family == "exponential":
                return cls(family, {"c": float(arg) if arg else 1.0})
        except ValueError:
            raise SpecError(f"malformed weight spec {text!r}") from None
        raise SpecError(f"malformed weight spec {text!r}")

    @classmethod
    def coerce(cls, obj):
        if isinstance(obj, WeightSpec):
            return obj
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, dict):
            return cls.from_dict(obj)
        raise SpecError(f"cannot interpret {obj!r} as a weight spec")


class RadialWeight:
    """A radial weight with tails and moments in log space.

    Closed forms for the log-tail (as a function of u) and the log-moment
    (as a function of log x) are used when present; otherwise both come
    from quadrature of ``exp(phi)``.  Results are cached per argument.
    """

    def __init__(self, phi, *, spec, label, log_tail_u=None, log_moment_s=None,
                 cfg=None, closed_forms=True):
        self._phi = phi
        self.spec = spec
        self.label = label
        self._closed_tail = log_tail_u if closed_forms else None
        self._closed_moment = log_moment_s if closed_forms else None
        self.closed_forms = closed_forms
        self.cfg = cfg if cfg is not None else QuadratureConfig.default()
        self._lock = threading.Lock()
        self._tail_cache = {}
        self._moment_cache = {}

    def __repr__(self):
        return f"RadialWeight({self.label})"

    @property
    def family(self):
        return self.spec.family

    @property
    def has_closed_tail(self):
        return self._closed_tail is not None

    @property
    def has_closed_moment(self):
        return self._closed_moment is not None

    def log_density_u(self, u):
        """phi(u) = log(omega(r)(1-r)) at r = 1 - exp(-u)."""
        return np.asarray(self._phi(np.asarray(u, dtype=float)), dtype=float)

    def density(self, r):
        u = r_to_u(r)
        with np.errstate(over="ignore"):
            out = np.exp(self.log_density_u(u) + u)
        return out if out.ndim else float(out)

    __call__ = density

    # tails

    def _cached(self, cache, keys, compute):
        keys = np.asarray(keys, dtype=float)
        flat = keys.ravel()
        uniq = np.unique(flat)
        with self._lock:
            missing = np.array([k for k in uniq if k not in cache], dtype=float)
        if missing.size:
            vals = np.asarray(compute(missing), dtype=float).reshape(-1)
            with self._lock:
                cache.update(zip(missing.tolist(), vals.tolist()))
        with self._lock:
            out = np.array([cache[k] for k in flat.tolist()], dtype=float)
        out = out.reshape(keys.shape)
        return out if out.ndim else float(out)

    def log_tail_u(self, u):
        """log omega-hat(r) at r = 1 - exp(-u)."""
        u = np.asarray(u, dtype=float)
        if np.any(u < 0) or np.any(np.isnan(u)):
            raise DomainError("tail needs r in [0, 1)")
        if self._closed_tail is not None:
            out = np.asarray(self._closed_tail(u), dtype=float)
            return out if out.ndim else float(out)
        return self._cached(self._tail_cache, u, self._quad_log_tail)

    def _quad_log_tail(self, u0):
        probes = np.concatenate([[0.0], np.geomspace(1e-9, 1.0, 19), 2.0 ** np.arange(1, 30)])

        def logf(s):
            return self._phi(u0[:, None] + s[None, :])

        res = integrate_exp(logf, self.cfg, probes=probes)
        val = np.asarray(res.value, dtype=float)
        if np.any(val == np.inf):
            raise NonIntegrableWeightError(f"{self.label} has infinite tail integral")
        accept_stalled(res, self.cfg, f"tail quadrature of {self.label}")
        return val

    def log_tail(self, r):
        return self.log_tail_u(r_to_u(r))

    def tail(self, r):
        """omega-hat(r), the integral of omega over [r, 1)."""
        out = np.exp(self.log_tail(r))
        return out if np.ndim(out) else float(out)

    # moments

    def log_moment_s(self, s):
        """log omega_x as a function of s = log x (s = -inf gives x = 0)."""
        s = np.asarray(s, dtype=float)
        if np.any(np.isnan(s)):
            raise DomainError("moment order must be a number")
        if self._closed_moment is not None:
            out = np.asarray(self._closed_moment(s), dtype=float)
            return out if out.ndim else float(out)
        return self._cached(self._moment_cache, s, self._quad_log_moment)

    def _quad_log_moment(self, s):
        fin = s[np.isfinite(s)]
        base = np.unique(np.concatenate([np.geomspace(1e-4, 1, 9), np.linspace(1, 64, 127),
                                         np.geomspace(64, 1e7, 40)]))
        with np.errstate(invalid="ignore"):
            local = np.concatenate([s[:, None] + np.arange(-3, 4)[None, :],
                                    0.5 * s[:, None] + np.arange(-3, 4)[None, :]], axis=1)
        local = np.where(np.isfinite(local) & (local > 1e-4), local, 1e-4)
        pts = np.concatenate([np.broadcast_to(base, (s.size, base.size)), local], axis=1)

        def logf_grid(u, s_col):
            with np.errstate(over="ignore"):
                return self._phi(u) - np.exp(s_col + _log_neg_log1m(u))

        scale = np.max(logf_grid(pts, s[:, None]), axis=1)
        hint = float(fin.max()) + 8.0 if fin.size else 0.0

        def logf(u):
            return logf_grid(u[None, :], s[:, None])

        res = integrate_exp(logf, self.cfg, hint=hint, scale=scale)
        val = np.asarray(res.value, dtype=float)
        if np.any(val == np.inf):
            raise NonIntegrableWeightError(f"{self.label} has infinite moments")
        accept_stalled(res, self.cfg, f"moment quadrature of {self.label}")
        return val

    def log_moment(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("moments are defined for x >= 0")
        with np.errstate(divide="ignore"):
            return self.log_moment_s(np.log(x))

    def moment(self, x):
        """omega_x, the integral of r**x omega(r) over [0, 1)."""
        out = np.exp(self.log_moment(x))
        return out if np.ndim(out) else float(out)

    def log_partial_moment(self, x, r_upper):
        """log of the integral of s**x omega(s) over [0, r_upper]."""
        x, r_upper = np.broadcast_arrays(np.asarray(x, dtype=float),
                                         np.asarray(r_upper, dtype=float))
        shape = x.shape
        x, ut = x.reshape(-1), r_to_u(r_upper).reshape(-1)
        with np.errstate(divide="ignore"):
            sx = np.log(x)

        def logf(t):
            u = ut[:, None] * t[None, :]
            with np.errstate(over="ignore"):
                return self._phi(u) - np.exp(sx[:, None] + _log_neg_log1m(u)) + np.log(ut)[:, None]

        probes = np.linspace(0.0, 1.0, 401)[1:]
        res = integrate_exp(logf, self.cfg, upper=1.0, probes=probes)
        accept_stalled(res, self.cfg, f"partial moment of {self.label}")
        out = np.asarray(res.value).reshape(shape)
        return out if out.ndim else float(out)

    @property
    def total_mass(self):
        return self.tail(0.0)


# families

def _check_positive(name, value, lower, strict=True):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise SpecError(f"parameter {name} must be a number, got {value!r}") from None
    if not math.isfinite(value) or (value <= lower if strict else value < lower):
        raise SpecError(f"parameter {name}={value} must exceed {lower}")
    return value


def _power(alpha, scale, spec, label, cfg, closed_forms):
    lc = math.log(scale)
    lga = special.gammaln(alpha + 1)

    def phi(u):
        return lc - (alpha + 1) * u

    def log_tail(u):
        return lc - (alpha + 1) * u - math.log(alpha + 1)

    def log_moment(s):
        x = np.exp(np.minimum(s, 600.0))
        exact = special.betaln(x + 1, alpha + 1)
        return lc + np.where(s > 600.0, lga - (alpha + 1) * s, exact)

    return RadialWeight(phi, spec=spec, label=label, log_tail_u=log_tail,
                        log_moment_s=log_moment, cfg=cfg, closed_forms=closed_forms)


def _log_power(alpha, spec, cfg, closed_forms):
    def phi(u):
        return -alpha * np.log1p(u)

    def log_tail(u):
        return -math.log(alpha - 1) - (alpha - 1) * np.log1p(u)

    return RadialWeight(phi, spec=spec, label=f"v_{alpha:g}", log_tail_u=log_tail,
                        cfg=cfg, closed_forms=closed_forms)


def _exponential(c, spec, cfg, closed_forms):
    lc = math.log(c)

    def phi(u):
        with np.errstate(over="ignore"):
            return -np.exp(lc + u) - u

    def log_tail(u):
        with np.errstate(over="ignore"):
            return -u + _log_expn2(np.exp(lc + u))

    return RadialWeight(phi, spec=spec, label=f"exp(-{c:g}/(1-r))", log_tail_u=log_tail,
                        cfg=cfg, closed_forms=closed_forms)


def _tabulated(params, spec, cfg, closed_forms):
    try:
        r = np.asarray(params["r"], dtype=float)
        w = np.asarray(params["values"], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise SpecError("tabulated weights need numeric 'r' and 'values' lists") from None
    if r.ndim != 1 or r.shape != w.shape or r.size < 2:
        raise SpecError("tabulated weights need matching 'r' and 'values' of length >= 2")
    if np.any(np.diff(r) <= 0) or r[0] < 0 or r[-1] >= 1:
        raise SpecError("tabulation radii must increase strictly inside [0, 1)")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise SpecError("tabulated samples must be finite and nonnegative")
    if not np.any(w > 0):
        raise NonIntegrableWeightError("tabulated weight vanishes identically")
    uk = r_to_u(r)
    # zero samples are floored far below any representable tail contribution
    lw = np.log(np.maximum(w, 1e-300)) - uk
    slopes = np.diff(lw) / np.diff(uk)
    if slopes[-1] >= 0:
        raise NonIntegrableWeightError(
            "tabulation grows like (1-r)^(-1) or faster at its last samples; "
            "the log-linear extrapolation is not integrable")
    # exact integral of exp(phi) over each segment of the piecewise-linear phi
    seg = _log_seg_integral(lw[:-1], slopes, np.diff(uk))
    tail_last = lw[-1] - math.log(-slopes[-1])
    right = np.empty(uk.size)
    right[-1] = tail_last
    for i in range(uk.size - 2, -1, -1):
        right[i] = np.logaddexp(seg[i], right[i + 1])
    first = slopes[0]

    def phi(u):
        u = np.asarray(u, dtype=float)
        inner = np.interp(u, uk, lw)
        lo = lw[0] + first * (u - uk[0])
        hi = lw[-1] + slopes[-1] * (u - uk[-1])
        return np.where(u < uk[0], lo, np.where(u > uk[-1], hi, inner))

    def log_tail(u):
        u = np.asarray(u, dtype=float)
        i = np.clip(np.searchsorted(uk, u, side="right") - 1, 0, uk.size - 2)
        beyond = u >= uk[-1]
        before = u < uk[0]
        # partial segment from u to the next knot
        ph = phi(u)
        nxt = uk[i + 1]
        part = _log_seg_integral(ph, slopes[i], nxt - u)
        inside = np.logaddexp(part, right[i + 1])
        # first segment extrapolation before the first knot uses the first slope
        pre = np.logaddexp(_log_seg_integral(ph, first, uk[0] - u), right[0])
        last = ph - np.log(-slopes[-1])
        return np.where(beyond, last, np.where(before, pre, inside))

    label = f"tabulated[{r.size}]"
    return RadialWeight(phi, spec=spec, label=label, log_tail_u=log_tail, cfg=cfg,
                        closed_forms=closed_forms)


def _log_seg_integral(a, b, length):
    """log of the integral of exp(a + b t) over [0, length]."""
    a, b, length = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, length)))
    bl = b * length
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = np.abs(bl) < 1e-8
        # (exp(bl) - 1)/b written stably for either sign of b
        pos = bl + np.log(-np.expm1(-bl) / b)
        neg = np.log(np.expm1(bl) / b)
        general = np.where(bl > 0, pos, neg)
        approx = np.log(length) + np.log1p(0.5 * bl)
        out = a + np.where(small, approx, general)
    return np.where(length > 0, out, -np.inf)


def make_weight(spec, *, closed_forms=True, cfg=None):
    """Build the weight described by ``spec`` (WeightSpec, dict or string).

    ``closed_forms=False`` forces every tail and moment through quadrature,
    which is how the closed forms are cross-checked.
    """
    spec = WeightSpec.coerce(spec)
    p = spec.params
    fam = spec.family
    if fam == "constant":
        scale = _check_positive("scale", p.get("scale", 1.0), 0.0)
        label = "constant" if scale == 1.0 else f"constant({scale:g})"
        return _power(0.0, scale, spec, label, cfg, closed_forms)
    if fam == "power":
        if "alpha" not in p:
            raise SpecError("power weight needs 'alpha'")
        alpha = _check_positive("alpha", p["alpha"], -1.0)
        scale = _check_positive("scale", p.get("scale", 1.0), 0.0)
        label = f"power({alpha:g})" if scale == 1.0 else f"power({alpha:g}, scale={scale:g})"
        return _power(alpha, scale, spec, label, cfg, closed_forms)
    if fam == "log_power":
        if "alpha" not in p:
            raise SpecError("log_power weight needs 'alpha'")
        alpha = _check_positive("alpha", p["alpha"], 1.0)
        return _log_power(alpha, spec, cfg, closed_forms)
    if fam == "exponential":
        c = _check_positive("c", p.get("c", 1.0), 0.0)
        return _exponential(c, spec, cfg, closed_forms)
    if fam == "tabulated":
        return _tabulated(p, spec, cfg, closed_forms)
    if fam == "derived":
        base = make_weight(p["base"], closed_forms=closed_forms, cfg=cfg)
        t = p.get("transform")
        if t == "modify":
            return modify(base, p.get("x"))
        if t == "hat":
            return tail_weight(base)
        if t == "tilde":
            return tilde(base)
        if t == "scale":
            return scaled(base, p.get("c"))
        raise SpecError(f"unknown transform {t!r}; expected one of {TRANSFORMS}")
    raise SpecError(f"unknown weight family {fam!r}")


def _power_params(w):
    """(alpha, scale) when w is a closed-form power or constant weight."""
    if not w.closed_forms:
        return None
    if w.family == "constant":
        return 0.0, float(w.spec.params.get("scale", 1.0))
    if w.family == "power":
        return float(w.spec.params["alpha"]), float(w.spec.params.get("scale", 1.0))
    return None


def _derived_spec(base, transform, **extra):
    return WeightSpec("derived", {"base": base.spec, "transform": transform, **extra})


def _power_spec(alpha, scale):
    if alpha == 0.0:
        return WeightSpec("constant", {} if scale == 1.0 else {"scale": scale})
    params = {"alpha": alpha}
    if scale != 1.0:
        params["scale"] = scale
    return WeightSpec("power", params)


def _require_integrable(w):
    try:
        lt = w.log_tail_u(0.0)
    except NonIntegrableWeightError:
        raise NonIntegrableWeightError(f"{w.label} is not integrable on [0, 1)") from None
    if not np.isfinite(lt):
        raise NonIntegrableWeightError(f"{w.label} is not integrable on [0, 1)")
    return w


def tail(w, r):
    return w.tail(r)


def moment(w, x):
    return w.moment(x)


def modify(w, x):
    """omega_[x](r) = omega(r) (1 - r)**x."""
    x = float(x) if x is not None else math.nan
    if not math.isfinite(x):
        raise SpecError("modify needs a finite exponent x")
    pp = _power_params(w)
    if pp is not None:
        alpha = pp[0] + x
        if alpha <= -1:
            raise NonIntegrableWeightError(
                f"{w.label} times (1-r)^{x:g} is not integrable on [0, 1)")
        return make_weight(_power_spec(alpha, pp[1]), cfg=w.cfg)
    phi = w._phi
    out = RadialWeight(lambda u: phi(u) - x * u, spec=_derived_spec(w, "modify", x=x),
                       label=f"{w.label}_[{x:g}]", cfg=w.cfg, closed_forms=w.closed_forms)
    return _require_integrable(out)


def tail_weight(w):
    """omega-hat regarded as a weight; its moments follow from Fubini."""
    pp = _power_params(w)
    if pp is not None:
        alpha, scale = pp
        return make_weight(_power_spec(alpha + 1, scale / (alpha + 1)), cfg=w.cfg)
    base = w

    def phi(u):
        return base.log_tail_u(u) - u

    def log_moment(s):
        # (omega-hat)_x = omega_{x+1} / (x+1)
        x = np.exp(np.asarray(s, dtype=float))
        return base.log_moment(x + 1) - np.log1p(x)

    return RadialWeight(phi, spec=_derived_spec(w, "hat"), label=f"hat({w.label})",
                        log_moment_s=log_moment, cfg=w.cfg, closed_forms=w.closed_forms)


def tilde(w):
    """omega-tilde(r) = omega-hat(r) / (1 - r); rejected when not integrable."""
    pp = _power_params(w)
    if pp is not None:
        alpha, scale = pp
        return make_weight(_power_spec(alpha, scale / (alpha + 1)), cfg=w.cfg)
    base = w
    out = RadialWeight(lambda u: base.log_tail_u(u), spec=_derived_spec(w, "tilde"),
                       label=f"tilde({w.label})", cfg=w.cfg, closed_forms=w.closed_forms)
    return _require_integrable(out)


def scaled(w, c):
    """c * omega for c > 0."""
    c = _check_positive("c", c, 0.0)
    lc = math.log(c)
    pp = _power_params(w)
    if pp is not None:
        return make_weight(_power_spec(pp[0], pp[1] * c), cfg=w.cfg)
    base = w
    lt = None if base._closed_tail is None else (lambda u: base._closed_tail(u) + lc)
    lm = None if base._closed_moment is None else (lambda s: base._closed_moment(s) + lc)
    return RadialWeight(lambda u: base._phi(u) + lc, spec=_derived_spec(w, "scale", c=c),
                        label=f"{c:g}*{w.label}", log_tail_u=lt, log_moment_s=lm,
                        cfg=w.cfg, closed_forms=w.closed_forms)


def star(nu, r):
    """nu*(r), the integral of log(s/r) nu(s) s over [r, 1), for r in (0, 1)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= 1):
        raise DomainError("star needs r in (0, 1)")
    flat = r.ravel()
    uniq, inv = np.unique(flat, return_inverse=True)
    u0 = r_to_u(uniq)
    d0 = np.exp(-u0)

    def logf(t):
        t = t[None, :]
        u = u0[:, None] + t
        # log(s/r) = log1p((s - r)/r) with s - r = d0 (1 - exp(-t))
        ratio = d0[:, None] * -np.expm1(-t) / uniq[:, None]
        with np.errstate(divide="ignore"):
            return (np.log(np.log1p(ratio)) + np.log1p(-np.exp(-u)) + nu._phi(u))

    probes = np.concatenate([np.geomspace(1e-6, 1.0, 25), 2.0 ** np.arange(1, 30)])
    res = integrate_exp(logf, nu.cfg, probes=probes)
    accept_stalled(res, nu.cfg, f"star({nu.label}) quadrature")
    out = np.exp(np.asarray(res.value))[inv].reshape(r.shape)
    return out if out.ndim else float(out)
