"""Norms and functionals of an analytic function against a radial weight.

Norm-like quantities are returned as p-th powers (``NormResult.value``),
with the root available as ``NormResult.root``.  Radial integrals run in
u = -log(1 - r) through integrate_exp, so integrands that live very close
to the boundary keep full relative accuracy.  Angular means on circles
of radius r are computed with the distance d = 1 - r passed separately
and with geometric breakpoints clustering at theta = 0, where the built-in
functions are singular as r -> 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, SingularMassError
from .functions import AnalyticFunction, derivative, integral_mean, make_function
from .quadrature import (QuadratureConfig, accept_stalled, integrate_exp, integrate_interval,
                         power_tail)
from .weights import RadialWeight, make_weight, star

METHODS = ("closed-form", "parseval", "radial-quadrature", "disc-quadrature", "series")
VARIANTS = ("omega_k", "omega_2k", "HL")
EXCLUSION_RADIUS = 1e-6
# closed forms are evaluated only where log M_inf stays below this
LOG_OVERFLOW = 600.0


@dataclass(frozen=True)
class NormResult:
    """A functional value (p-th power for norms) with provenance."""

    value: float
    err_est: float
    method: str
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "err_est", float(self.err_est))
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not math.isfinite(self.value):
            raise ConvergenceError(f"non-finite functional value {self.value}")

    @property
    def root(self):
        """value ** (1/p) when a p is recorded, else the value itself."""
        p = self.inputs.get("p")
        if p is None or self.inputs.get("kind") != "norm":
            return self.value
        return self.value ** (1.0 / p)

    def to_dict(self):
        return {"value": self.value, "err_est": self.err_est, "method": self.method,
                "inputs": dict(self.inputs)}


# ----- coercion and provenance ------------------------------------------------


def _function(f):
    return f if isinstance(f, AnalyticFunction) else make_function(f)


def _weight(w):
    return w if isinstance(w, RadialWeight) else make_weight(w)


def _fdesc(f):
    return f.spec.to_dict() if f.spec is not None else f.label


def _inputs(kind, f, w, p, **extra):
    out = {"kind": kind, "function": _fdesc(f), "p": float(p)}
    if w is not None:
        out["weight"] = w.spec.to_dict()
        out["weight_label"] = w.label
    out["function_label"] = f.label
    for k, v in extra.items():
        if v is not None:
            out[k] = v
    return out


def _check_p(p, name="p"):
    p = float(p)
    if not (p > 0 and math.isfinite(p)):
        raise DomainError(f"{name} must be a positive finite number, got {p}")
    return p


def _check_upper(upper):
    upper = float(upper)
    if not 0.0 < upper <= 1.0:
        raise DomainError(f"upper must lie in (0, 1], got {upper}")
    return upper


def _u_of(r):
    return math.inf if r >= 1.0 else -math.log1p(-r)


def _outer(cfg):
    # outer integrals of inner quadrature results cannot beat the inner noise
    return cfg.with_tol(max(cfg.rel_tol * 1e2, 1e-8))


def _single_term(f):
    nz = np.flatnonzero(f.coeffs)
    if nz.size == 1:
        n = int(nz[0])
        return n, abs(f.coeffs[n])
    return None


def _cap_for(*fs):
    """Largest u at which all of ``fs`` can be evaluated without overflow."""
    caps = []
    for f in fs:
        if f.exact:
            caps.append(700.0)
        elif f.closed and f.closed[0].log_max_u is not None:
            lo, hi = 0.0, 700.0
            if f.log_max_u(np.array([hi]))[0] <= LOG_OVERFLOW:
                caps.append(hi)
                continue
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                if f.log_max_u(np.array([mid]))[0] <= LOG_OVERFLOW:
                    lo = mid
                else:
                    hi = mid
            caps.append(lo)
        else:
            caps.append(_u_of(f.r_max))
    return min(caps)


# ----- radial integration ---------------------------------------------------------


_PROBES = np.concatenate([np.geomspace(1e-6, 1.0, 13), np.arange(2.0, 61.0)])


def _radial(logf, cfg, upper, what, *, cap=math.inf, breakpoints=None):
    """(integral, error) of exp(logf(u)) over u in [0, u(upper))."""
    u_up = _u_of(upper)
    probes = _PROBES[_PROBES < min(u_up, cap)]
    if u_up < math.inf:
        probes = np.concatenate([probes, [u_up * (1 - 1e-9)]])
    res = integrate_exp(logf, cfg, upper=u_up, probes=probes, cap=cap,
                        breakpoints=breakpoints)
    val = float(res.value)
    if not (val < math.inf):
        raise ConvergenceError(f"{what} diverges")
    if not res.ok and u_up == math.inf and cap < math.inf:
        tail = power_tail(logf, cap)
        if tail is None:
            raise ConvergenceError(f"{what} has not converged by 1 - r = {math.exp(-cap):.3g} "
                                   "(likely divergent)")
        v = math.exp(val)
        return v + tail[0], v * float(res.error) + tail[1]
    accept_stalled(res, cfg, what)
    v = math.exp(val)
    return v, v * float(res.error)


def _log_r(u):
    return np.log1p(-np.exp(-u))


def _log_majorant_u(f, u):
    """log of a radial majorant of |f| on |z| = r: M_inf when coefficients
    are nonnegative, else sum |a_k| r^k."""
    if "nonneg_coeffs" in f.flags:
        return f.log_max_u(u)
    r = -np.expm1(-u)
    f._require_series(r, "majorant")
    with np.errstate(divide="ignore"):
        return np.log(kernels.horner_real(np.abs(f.coeffs), r))


def _theta_breaks(b, dmin, symmetric, extra=()):
    k = np.arange(1, int(min(-math.log10(max(dmin, 1e-300)), 300)) + 2)
    geo = math.pi * 10.0 ** -k.astype(float)
    pts = [np.linspace(0.0, b, 9)[1:-1], geo]
    if not symmetric:
        pts.append(b - geo)
    pts.append(np.asarray(extra, dtype=float))
    out = np.unique(np.concatenate(pts))
    return out[(out > 0) & (out < b)]


_ANGULAR_BATCH = 16


def _angular_mean(F, r, d, cfg, symmetric, extra=()):
    """(1/2 pi) * integral over theta of F(r, d, theta, rows), per radius.

    ``rows`` is the slice of the radius array being evaluated, for
    integrands carrying per-radius data.
    """
    b = math.pi if symmetric else 2 * math.pi
    out = np.empty(r.shape)
    # radii share one angular partition, so keep the batches small
    for lo in range(0, r.size, _ANGULAR_BATCH):
        rs, ds = r[lo:lo + _ANGULAR_BATCH], d[lo:lo + _ANGULAR_BATCH]

        def G(theta, rs=rs, ds=ds, lo=lo):
            return F(rs[:, None], ds[:, None], theta[None, :], slice(lo, lo + rs.size))

        res = integrate_interval(G, 0.0, b, cfg,
                                 breakpoints=_theta_breaks(b, float(np.min(ds)), symmetric, extra))
        out[lo:lo + rs.size] = np.asarray(res.value, dtype=float) / b
    return out


def _log_mean_pp(f, p, u, cfg):
    """log M_p(r, f)^p at r = 1 - exp(-u)."""
    u = np.asarray(u, dtype=float)
    r = -np.expm1(-u)
    d = np.exp(-u)
    st = _single_term(f)
    if st is not None:
        n, a = st
        with np.errstate(divide="ignore"):
            return p * (math.log(a) + n * _log_r(u))
    if not np.any(f.coeffs):
        return np.full(u.shape, -np.inf)
    out = np.empty(u.shape)
    done = np.zeros(u.shape, dtype=bool)
    if p == 2:
        done = r <= f.r_max
        if done.any():
            with np.errstate(divide="ignore"):
                out[done] = np.log(kernels.horner_real(np.abs(f.coeffs) ** 2, r[done] ** 2))
    rest = ~done
    if rest.any():
        ur, rr, dr = u[rest], r[rest], d[rest]
        scale = _log_majorant_u(f, ur)
        safe = np.where(np.isfinite(scale), scale, 0.0)

        def F(rc, dc, th, rows, safe=safe):
            with np.errstate(over="ignore", invalid="ignore"):
                return (np.abs(f.eval_polar(rc, th, dc)) * np.exp(-safe[rows, None])) ** p

        mean = _angular_mean(F, rr, dr, cfg, f._real)
        with np.errstate(divide="ignore"):
            out[rest] = p * safe + np.log(mean)
    return out


# ----- Bergman, Dirichlet, Hardy ------------------------------------------------------


def bergman_norm(f, p, nu, cfg=None, *, upper=1.0, closed_forms=True):
    """||f||^p in A^p_nu: the integral of |f|^p nu over the disc of radius ``upper``."""
    f, nu = _function(f), _weight(nu)
    p, upper = _check_p(p), _check_upper(upper)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("norm", f, nu, p, upper=upper if upper < 1 else None)
    st = _single_term(f) if closed_forms else None
    if st is not None:
        n, a = st
        x = n * p + 1
        lm = nu.log_moment(x) if upper >= 1 else nu.log_partial_moment(x, upper)
        return NormResult(2 * math.pi * a ** p * math.exp(float(lm)), 0.0, "closed-form", inputs)
    if not np.any(f.coeffs):
        return NormResult(0.0, 0.0, "closed-form", inputs)
    if p == 2 and f.exact and upper >= 1 and closed_forms:
        k = np.flatnonzero(f.coeffs)
        mom = np.exp(nu.log_moment(2.0 * k + 1))
        val = 2 * math.pi * float(np.sum(np.abs(f.coeffs[k]) ** 2 * mom))
        return NormResult(val, val * cfg.rel_tol, "parseval", inputs)

    def logf(u):
        return math.log(2 * math.pi) + _log_r(u) + _log_mean_pp(f, p, u, cfg) \
            + nu.log_density_u(u)

    v, e = _radial(logf, _outer(cfg), upper, f"Bergman norm of {f.label}", cap=_cap_for(f))
    return NormResult(v, e, "radial-quadrature", inputs)


def dirichlet_norm(f, p, nu, cfg=None, *, upper=1.0, closed_forms=True):
    """||f||^p in D^p_nu = ||f'||^p in A^p_nu + |f(0)|^p."""
    f = _function(f)
    nu = _weight(nu)
    p = _check_p(p)
    inner = bergman_norm(derivative(f), p, nu, cfg, upper=upper, closed_forms=closed_forms)
    f0 = abs(f.coeffs[0]) ** p
    inputs = _inputs("norm", f, nu, p, upper=upper if upper < 1 else None)
    return NormResult(inner.value + f0, inner.err_est, inner.method, inputs)


def hardy_norm(f, p, cfg=None, *, closed_forms=True):
    """||f||^p in H^p as the monotone limit of M_p(r_j, f)^p, r_j = 1 - 2^-j.

    The radii run up to the largest truncation-valid one (all the way to
    1 - 2^-52 for polynomials and closed forms); ``err_est`` is the last
    increment.  Raises ConvergenceError when the increments do not settle.
    """
    f = _function(f)
    p = _check_p(p)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("norm", f, None, p)
    st = _single_term(f) if closed_forms else None
    if st is not None:
        return NormResult(st[1] ** p, 0.0, "closed-form", inputs)
    if p == 2 and f.exact and closed_forms:
        val = float(np.sum(np.abs(f.coeffs) ** 2))
        return NormResult(val, 0.0, "parseval", inputs)
    tol = max(cfg.rel_tol * 10, 1e-10)
    j_max = 52 if (f.exact or f.closed) else int(-math.log2(max(1 - f.r_max, 2.0**-52)))
    prev = None
    incs = []
    for j in range(1, j_max + 1):
        d = 2.0 ** -j
        val = float(np.exp(_log_mean_pp(f, p, np.array([j * math.log(2)]), cfg))[0])
        if prev is not None:
            incs.append(val - prev)
            if abs(incs[-1]) <= tol * val:
                return NormResult(val, abs(incs[-1]), "series", inputs)
            if len(incs) >= 12 and all(incs[-i] >= 0.999 * incs[-i - 1] for i in range(1, 4)):
                raise ConvergenceError(f"{f.label} does not appear to lie in H^{p:g}: "
                                       f"M_p^p keeps growing at 1 - r = {d:.3g}")
        prev = val
    if incs and abs(incs[-1]) <= 1e-6 * prev:
        return NormResult(prev, abs(incs[-1]), "series", inputs)
    raise ConvergenceError(f"Hardy norm of {f.label} did not settle by r = 1 - 2^-{j_max}")


# ----- Laplacian integrals ------------------------------------------------------------


def _interior_zeros(f, upper):
    """Zeros of f with 0 < |z| < upper as (z0, multiplicity); polynomials only."""
    if not f.exact:
        return []
    c = f.coeffs
    nz = np.flatnonzero(c)
    if nz.size < 2:
        return []
    poly = c[nz[0]:nz[-1] + 1]
    roots = np.roots(poly[::-1])
    roots = roots[(np.abs(roots) < upper)]
    out = []
    for z in roots:
        for i, (z0, m) in enumerate(out):
            if abs(z - z0) < 1e-6:
                out[i] = (z0, m + 1)
                break
        else:
            out.append((complex(z), 1))
    return out


def _laplacian_integral(f, p, log_factor, cfg, upper, what):
    """Integral of Delta|f|^p K(|z|) over D(0, upper), with
    log_factor(u) = log K(r) at r = 1 - exp(-u)."""
    fp = derivative(f)
    zeros = _interior_zeros(f, upper) if p < 2 else []
    sym = f._real
    q = p - 2

    def make_logf(delta):
        def logf(u):
            u = np.asarray(u, dtype=float)
            r = -np.expm1(-u)
            d = np.exp(-u)
            sf = _log_majorant_u(f, u)
            sd = _log_majorant_u(fp, u)
            sf = np.where(np.isfinite(sf), sf, 0.0)
            sd = np.where(np.isfinite(sd), sd, 0.0)

            def F(rc, dc, th, rows):
                fv = np.abs(f.eval_polar(rc, th, dc)) * np.exp(-sf[rows, None])
                dv = np.abs(fp.eval_polar(rc, th, dc)) * np.exp(-sd[rows, None])
                with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                    val = fv ** q * dv ** 2
                val = np.where(np.isfinite(val), val, 0.0)
                if delta:
                    z = rc * np.exp(1j * th)
                    for z0, _ in zeros:
                        val = np.where(np.abs(z - z0) < delta, 0.0, val)
                return val

            extra = []
            for z0, _ in zeros:
                t0 = math.atan2(z0.imag, z0.real) % (2 * math.pi)
                if sym and t0 > math.pi:
                    t0 = 2 * math.pi - t0
                off = (delta / abs(z0)) * 2.0 ** np.arange(0, 30)
                extra += [t0, *(t0 - off), *(t0 + off)]
            mean = _angular_mean(F, r, d, cfg, sym, extra)
            with np.errstate(divide="ignore"):
                return (2 * math.log(p) + q * sf + 2 * sd + np.log(mean)
                        + math.log(2 * math.pi) + _log_r(u) - u + log_factor(u))
        return logf

    def breaks(delta):
        pts = []
        for z0, _ in zeros:
            rho = abs(z0)
            off = delta * 2.0 ** np.arange(0, 40)
            rr = np.concatenate([[rho], rho - off, rho + off])
            rr = rr[(rr > 0) & (rr < min(upper, 1.0))]
            pts.append(-np.log1p(-rr))
        return np.concatenate(pts) if pts else None

    outer = _outer(cfg)
    cap = _cap_for(f, fp)
    if not zeros:
        return _radial(make_logf(0.0), outer, upper, what, cap=cap)
    # excluded discs around interior zeros, checked by halving the radius
    # and extrapolating the excluded mass (it scales like delta^(m p))
    mp = min(m for _, m in zeros) * p
    ratio = 2.0 ** mp - 1.0
    delta = EXCLUSION_RADIUS
    vals = [_radial(make_logf(delta), outer, upper, what, cap=cap, breakpoints=breaks(delta))]
    check = max(outer.rel_tol * 10, 1e-7)
    for _ in range(8):
        delta /= 2
        vals.append(_radial(make_logf(delta), outer, upper, what, cap=cap,
                            breakpoints=breaks(delta)))
        if len(vals) >= 3:
            (a, _), (b, _), (c, ec) = vals[-3:]
            est1 = b + (b - a) / ratio
            est2 = c + (c - b) / ratio
            if abs(est2 - est1) <= check * abs(est2):
                return est2, ec + abs(c - b) / ratio + abs(est2 - est1)
    raise SingularMassError(f"{what}: excluded mass around the zeros of {f.label} "
                            "does not scale as expected")


def h_class_norm(f, p, omega, cfg=None, *, upper=1.0, closed_forms=True):
    """||f||^p in H^p_omega: the integral of Delta|f|^p omega-hat over D(0, upper)."""
    f, w = _function(f), _weight(omega)
    p, upper = _check_p(p), _check_upper(upper)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("norm", f, w, p, upper=upper if upper < 1 else None)
    st = _single_term(f) if closed_forms else None
    if st is not None:
        n, a = st
        if n == 0:
            return NormResult(0.0, 0.0, "closed-form", inputs)
        x = n * p
        # 2 pi p^2 n^2 |a|^p * int_0^R r^(np-1) omega-hat(r) dr, by parts
        if upper >= 1:
            val = 2 * math.pi * p * n * a ** p * w.moment(x)
        else:
            part = math.exp(float(w.log_partial_moment(x, upper)))
            val = 2 * math.pi * p * n * a ** p * (upper ** x * w.tail(upper) + part)
        return NormResult(val, 0.0, "closed-form", inputs)
    if p == 2 and closed_forms:
        # Delta|f|^2 = 4|f'|^2, so the integral is 4 * int Area(r) omega(r) dr
        # (+ boundary term omega-hat(R) Area(R) for partial discs)
        def logf(u):
            return math.log(4) + f.log_area_u(u) + w.log_density_u(u)

        v, e = _radial(logf, cfg, upper, f"H-class norm of {f.label}", cap=_cap_for(f))
        if upper < 1:
            uu = np.array([_u_of(upper)])
            v += 4 * float(np.exp(f.log_area_u(uu) + w.log_tail_u(uu))[0])
        return NormResult(v, e, "radial-quadrature", inputs)
    v, e = _laplacian_integral(f, p, w.log_tail_u, cfg, upper, f"H-class norm of {f.label}")
    return NormResult(v, e, "disc-quadrature", inputs)


def s_class_norm(f, p, omega, cfg=None, *, upper=1.0, closed_forms=True):
    """||f||^p in S^p_omega: the integral of Area(f(D(0, r)))^(p/2) omega(r)."""
    f, w = _function(f), _weight(omega)
    p, upper = _check_p(p), _check_upper(upper)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("norm", f, w, p, upper=upper if upper < 1 else None)
    st = _single_term(f) if closed_forms else None
    if st is not None:
        n, a = st
        if n == 0:
            return NormResult(0.0, 0.0, "closed-form", inputs)
        x = n * p
        lm = w.log_moment(x) if upper >= 1 else w.log_partial_moment(x, upper)
        val = (math.pi * n) ** (p / 2) * a ** p * math.exp(float(lm))
        return NormResult(val, 0.0, "closed-form", inputs)

    def logf(u):
        return 0.5 * p * f.log_area_u(u) + w.log_density_u(u)

    v, e = _radial(logf, cfg, upper, f"S-class norm of {f.label}", cap=_cap_for(f))
    return NormResult(v, e, "radial-quadrature", inputs)


def area_image(f, r, cfg=None, *, cross_check=False):
    """Area(f(D(0, r))) = pi * sum k |a_k|^2 r^(2k), multiplicities counted.

    With ``cross_check`` the series is compared against disc quadrature of
    |f'|^2 and ConvergenceError raised on disagreement beyond 1e-8.
    """
    f = _function(f)
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    if r == 0.0:
        return 0.0
    val = float(np.exp(f.log_area_u(np.array([_u_of(r)])))[0])
    if cross_check:
        q = area_by_quadrature(f, r, cfg)
        if abs(q - val) > 1e-8 * abs(val):
            raise ConvergenceError(f"area series {val!r} and quadrature {q!r} disagree")
    return val


def area_by_quadrature(f, r, cfg=None):
    """The integral of |f'|^2 over D(0, r) by tensor quadrature."""
    f = _function(f)
    cfg = cfg or QuadratureConfig.default()
    fp = derivative(f)
    inner = cfg.with_tol(cfg.rel_tol / 10)
    sym = f._real

    def radial(rho):
        m = _angular_mean(lambda rc, dc, th, rows: np.abs(fp.eval_polar(rc, th, dc)) ** 2,
                          rho, 1.0 - rho, inner, sym)
        return 2 * math.pi * m * rho

    res = integrate_interval(radial, 0.0, r, cfg)
    return float(res.value)


# ----- J, I and coefficient functionals -------------------------------------------------


def j_functional(f, p, omega, cfg=None, *, upper=1.0, closed_forms=True):
    """J^p_omega(f): the integral of M_inf(r, f)^p omega(r) over [0, upper]."""
    f, w = _function(f), _weight(omega)
    p, upper = _check_p(p), _check_upper(upper)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("functional", f, w, p, upper=upper if upper < 1 else None)
    st = _single_term(f) if closed_forms else None
    if st is not None:
        n, a = st
        x = n * p
        lm = w.log_moment(x) if upper >= 1 else w.log_partial_moment(x, upper)
        return NormResult(a ** p * math.exp(float(lm)), 0.0, "closed-form", inputs)

    def logf(u):
        return p * f.log_max_u(u) + w.log_density_u(u)

    v, e = _radial(logf, cfg, upper, f"J functional of {f.label}", cap=_cap_for(f))
    return NormResult(v, e, "radial-quadrature", inputs)


def i_functional(f, p, q, omega, cfg=None, *, upper=1.0):
    """I_{p,q,omega}(f): the integral of M_q(r, f')^p (1 - r)^(p(1 - 1/q)) omega(r)."""
    f, w = _function(f), _weight(omega)
    p, q, upper = _check_p(p), _check_p(q, "q"), _check_upper(upper)
    cfg = cfg or QuadratureConfig.default()
    inputs = _inputs("functional", f, w, p, q=q, upper=upper if upper < 1 else None)
    fp = derivative(f)
    expo = p * (1 - 1 / q)

    def logf(u):
        return (p / q) * _log_mean_pp(fp, q, u, cfg) - expo * u + w.log_density_u(u)

    st = _single_term(fp)
    closed = st is not None or (q == 2 and fp.exact)
    v, e = _radial(logf, cfg if closed else _outer(cfg), upper,
                   f"I functional of {f.label}", cap=_cap_for(fp))
    return NormResult(v, e, "radial-quadrature", inputs)


def coeff_functional(f, p, omega, variant="omega_k", cfg=None):
    """Coefficient sums over 0 <= k <= N.

    omega_k:  sum |a_k|^p (k+1)^(p-1) omega_k
    HL:       sum |a_k|^p (k+1)^(p-2) omega_{kp+1}
    omega_2k: sum over k >= 1 of |a_k|^p k^(p-1) omega_{2k}

    ``err_est`` estimates the neglected tail from the power-law decay of
    the last summands when those are not negligible.
    """
    f, w = _function(f), _weight(omega)
    p = _check_p(p)
    cfg = cfg or QuadratureConfig.default()
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    a = np.abs(f.coeffs)
    k = np.arange(a.size, dtype=float)
    if variant == "omega_2k":
        a = a.copy()
        a[0] = 0.0
    nz = np.flatnonzero(a)
    terms = np.zeros(a.size)
    if nz.size:
        kk = k[nz]
        if variant == "omega_k":
            lt = p * np.log(a[nz]) + (p - 1) * np.log1p(kk) + w.log_moment(kk)
        elif variant == "HL":
            lt = p * np.log(a[nz]) + (p - 2) * np.log1p(kk) + w.log_moment(kk * p + 1)
        else:
            lt = p * np.log(a[nz]) + (p - 1) * np.log(kk) + w.log_moment(2 * kk)
        terms[nz] = np.exp(lt)
    val = float(np.sum(terms))
    err = 0.0
    N = a.size - 1
    if not f.exact and N >= 4 and terms[N] > cfg.abs_tol:
        t1, t2 = terms[N // 2], terms[N]
        s = math.log(t1 / t2) / math.log(N / (N // 2)) if t2 > 0 and t1 > 0 else 0.0
        err = t2 * N / (s - 1) if s > 1 else math.inf
    inputs = _inputs("functional", f, w, p, variant=variant, tail=float(err))
    return NormResult(val, err, "series", inputs)


# ----- identities ---------------------------------------------------------------------


def hardy_stein_spencer(f, p, r, cfg=None):
    """Both sides of M_p(r, f)^p = (1/2 pi) int_{D(0,r)} Delta|f|^p log(r/|z|) dA + |f(0)|^p."""
    f = _function(f)
    p = _check_p(p)
    cfg = cfg or QuadratureConfig.default()
    r = float(r)
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    lhs = integral_mean(f, p, r, cfg, cross_check=False) ** p
    log_r = math.log(r)

    def log_factor(u):
        # log(log(r / rho)) / (2 pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(log_r - _log_r(u)) - math.log(2 * math.pi)

    v, _ = _laplacian_integral(f, p, log_factor, cfg, r, "Hardy-Stein-Spencer integral")
    return lhs, v + abs(f.coeffs[0]) ** p


def bergman_identity(f, p, nu, cfg=None):
    """Both sides of ||f||^p_{A^p_nu} = int Delta|f|^p nu* dA + nu(D) |f(0)|^p."""
    f, nu = _function(f), _weight(nu)
    p = _check_p(p)
    cfg = cfg or QuadratureConfig.default()
    lhs = bergman_norm(f, p, nu, cfg).value

    def log_factor(u):
        r = -np.expm1(-u)
        with np.errstate(divide="ignore"):
            return np.log(star(nu, np.clip(r, 1e-300, 1 - 1e-16)))

    v, _ = _laplacian_integral(f, p, log_factor, cfg, 1.0, "Bergman identity integral")
    mass = 2 * math.pi * nu.moment(1.0)
    return lhs, v + mass * abs(f.coeffs[0]) ** p
