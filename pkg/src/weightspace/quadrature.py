"""Adaptive quadrature on [0, 1) and over discs centred at the origin.

Radial integrals are computed after the substitution u = -log(1 - r), which
maps [0, 1) onto [0, inf) and turns log-power behaviour at r = 1 into
algebraic decay in u.  The half-line is covered by [0, 1] followed by the
doubling segments [1, 2], [2, 4], ... until a segment contributes below
tolerance.  Every rule here is a 7-15 Gauss-Kronrod pair with the QUADPACK
error heuristic, applied to vector-valued integrands that share one
adaptive partition.
"""

import math
import os
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
_GAUSS_W = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
# beyond this u the radius 1 - exp(-u) rounds to 1
R_FORM_U_CAP = -math.log(_EPS / 2)
MAX_DOUBLINGS = 1000
_HUGE = 1e300
_DIVERGENCE_RATIO = 0.999
_DIVERGENCE_STREAK = 30


def _env_tol():
    raw = os.environ.get("WEIGHTSPACE_TOL")
    if not raw:
        return None
    try:
        tol = float(raw)
    except ValueError:
        raise DomainError(f"WEIGHTSPACE_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise DomainError(f"WEIGHTSPACE_TOL must be positive, got {raw!r}")
    return tol


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by every integral in the package.

    ``endpoint_grading`` switches the u = -log(1-r) substitution on radial
    integrals; it is a flag rather than a grading exponent because the
    logarithmic map already clusters nodes geometrically at r = 1.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**16
    endpoint_grading: bool = True

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be nonnegative, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")

    @classmethod
    def default(cls):
        """Defaults, with ``rel_tol`` taken from WEIGHTSPACE_TOL when set."""
        tol = _env_tol()
        return cls() if tol is None else cls(rel_tol=tol)

    def with_tol(self, rel_tol):
        return QuadratureConfig(rel_tol, self.abs_tol, self.max_subdivisions,
                                self.endpoint_grading)


@dataclass(frozen=True)
class QuadratureResult:
    """Value and error estimate; unpacks as ``value, error``."""

    value: Any
    error: Any
    converged: Any = True

    def __iter__(self):
        return iter((self.value, self.error))

    @property
    def ok(self):
        return bool(np.all(self.converged))


def _resolve(cfg):
    return QuadratureConfig.default() if cfg is None else cfg


def _gk_panels(f, lo, hi):
    """Apply the 15-point Kronrod rule and its error estimate on each panel."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float)
    fx = fx.reshape(fx.shape[:-1] + x.shape)
    if not np.all(np.isfinite(fx)):
        bad = np.argwhere(~np.isfinite(fx))[0]
        raise DomainError(f"integrand is not finite at {x[tuple(bad[-2:])]!r}")
    kron = (fx @ KRONROD_WEIGHTS) * h
    gauss = (fx[..., _GAUSS_IDX] @ _GAUSS_W) * h
    mean = 0.5 * kron / np.where(h > 0, h, 1.0)
    resasc = (np.abs(fx - mean[..., None]) @ KRONROD_WEIGHTS) * h
    resabs = (np.abs(fx) @ KRONROD_WEIGHTS) * h
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50 * _EPS * resabs)
    return kron, err


def _adaptive(f, a, b, rel_tol, abs_tol, max_panels, breakpoints=None):
    """Globally adaptive integration of a vector-valued f over [a, b].

    ``f`` maps a 1-d array of abscissae to an array whose last axis runs
    over them.  ``abs_tol`` may be a scalar or one value per component.
    Returns (value, error, converged) with component-shaped arrays.

    Panels whose halves neither halve the error estimate nor change the
    integral are round-off limited (QUADPACK's ier=2 situation); after
    three such splits in a row they are no longer refined.
    """
    edges = [a]
    if breakpoints is not None:
        edges += sorted(float(t) for t in breakpoints if a < t < b)
    edges.append(b)
    lo = np.array(edges[:-1], dtype=float)
    hi = np.array(edges[1:], dtype=float)
    K, E = _gk_panels(f, lo, hi)
    lead = K.shape[:-1]
    K = K.reshape(-1, lo.size)
    E = E.reshape(-1, lo.size)
    noisy = np.zeros(lo.size, dtype=int)
    abs_vec = np.asarray(abs_tol, dtype=float).reshape(-1)
    if abs_vec.size == 1:
        abs_vec = np.full(K.shape[0], abs_vec[0])
    converged = np.zeros(K.shape[0], dtype=bool)
    while True:
        total = K.sum(axis=1)
        err = E.sum(axis=1)
        target = np.maximum(rel_tol * np.abs(total), abs_vec)
        bad = err > target
        converged = ~bad
        if not bad.any() or lo.size >= max_panels:
            break
        Eb = np.where(noisy[None, :] >= 3, 0.0, E[bad])
        order = np.argsort(-Eb, axis=1, kind="stable")
        srt = np.take_along_axis(Eb, order, axis=1)
        remaining = Eb.sum(axis=1)[:, None] - np.cumsum(srt, axis=1) + srt
        take = (remaining > 0.5 * target[bad][:, None]) & (srt > 0)
        sel = np.zeros_like(take)
        np.put_along_axis(sel, order, take, axis=1)
        idx = np.flatnonzero(sel.any(axis=0))
        if idx.size == 0:
            break
        budget = max_panels - lo.size
        if idx.size > budget:
            worst = np.argsort(-E[:, idx].max(axis=0), kind="stable")[:budget]
            idx = np.sort(idx[worst])
        mid = 0.5 * (lo[idx] + hi[idx])
        ok = (mid > lo[idx]) & (mid < hi[idx])
        if not ok.any():
            break
        idx, mid = idx[ok], mid[ok]
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        Kn, En = _gk_panels(f, new_lo, new_hi)
        Kn = Kn.reshape(K.shape[0], -1)
        En = En.reshape(E.shape[0], -1)
        m = idx.size
        scale = np.maximum(target, 1e-300)[:, None]
        parent_err = (E[:, idx] / scale).sum(axis=0)
        child_err = ((En[:, :m] + En[:, m:]) / scale).sum(axis=0)
        child_val = Kn[:, :m] + Kn[:, m:]
        same = np.all(np.abs(child_val - K[:, idx]) <= 1e-5 * np.abs(child_val) + 1e-300, axis=0)
        stuck = same & (child_err >= 0.5 * parent_err)
        child_noisy = np.where(stuck, noisy[idx] + 1, 0)
        keep = np.ones(lo.size, dtype=bool)
        keep[idx] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        noisy = np.concatenate([noisy[keep], child_noisy, child_noisy])
        K = np.concatenate([K[:, keep], Kn], axis=1)
        E = np.concatenate([E[:, keep], En], axis=1)
    return (K.sum(axis=1).reshape(lead), E.sum(axis=1).reshape(lead),
            converged.reshape(lead))


def _halfline(G, rel_tol, abs_tol, max_panels, hint=0.0, cap=math.inf, breakpoints=None):
    """Integrate G over [0, cap) by [0, 1] and then doubling segments.

    Components whose segment contributions stop decaying (ratio above
    0.999 for many consecutive doublings) or overflow are reported as
    divergent: value inf, converged False.
    """
    end = min(1.0, cap)
    total, err, conv = _adaptive(G, 0.0, end, rel_tol, abs_tol, max_panels, breakpoints)
    total = np.array(total, dtype=float)
    err = np.array(err, dtype=float)
    conv = np.array(conv, dtype=bool)
    shape = total.shape
    active = np.ones(shape, dtype=bool)
    diverged = np.zeros(shape, dtype=bool)
    prev = np.full(shape, np.nan)
    last = np.zeros(shape)
    streak = np.zeros(shape, dtype=int)
    abs_arr = np.broadcast_to(np.asarray(abs_tol, dtype=float).reshape(-1)
                              if np.size(abs_tol) > 1 else float(abs_tol), shape)
    s = end
    for _ in range(MAX_DOUBLINGS):
        if not active.any() or s >= cap:
            break
        b = min(2.0 * s, cap)
        if not math.isfinite(b):
            break
        cols = np.flatnonzero(active.reshape(-1))
        if cols.size == total.size:
            g = G
        else:
            def g(x, cols=cols):
                out = np.asarray(G(x), dtype=float)
                return out.reshape(-1, out.shape[-1])[cols]
        seg_abs = abs_arr.reshape(-1)[cols]
        seg, seg_err, seg_conv = _adaptive(
            g, s, b, rel_tol, np.maximum(seg_abs, 0.1 * rel_tol * np.abs(total.reshape(-1)[cols])),
            max_panels, breakpoints)
        seg = np.asarray(seg, dtype=float).reshape(-1)
        seg_err = np.asarray(seg_err, dtype=float).reshape(-1)
        flat = (total.reshape(-1), err.reshape(-1), conv.reshape(-1), prev.reshape(-1),
                last.reshape(-1), streak.reshape(-1), active.reshape(-1), diverged.reshape(-1))
        tot, er, cv, pv, ls, st, ac, dv = flat
        tot[cols] += seg
        er[cols] += seg_err
        cv[cols] &= np.asarray(seg_conv).reshape(-1)
        mag = np.abs(seg)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = mag / np.abs(pv[cols])
        growing = np.isfinite(pv[cols]) & (ratio >= _DIVERGENCE_RATIO) & (b >= hint)
        st[cols] = np.where(growing, st[cols] + 1, 0)
        small = mag <= np.maximum(rel_tol * np.abs(tot[cols]), seg_abs)
        decaying = ~np.isfinite(pv[cols]) | (ratio <= 1.0) | (mag == 0)
        done = small & decaying & (b >= hint)
        bad = ~np.isfinite(tot[cols]) | (st[cols] >= _DIVERGENCE_STREAK)
        pv[cols] = mag
        ls[cols] = mag
        dv[cols[bad]] = True
        ac[cols[done | bad]] = False
        s = b
    if active.any():
        conv &= ~active
    err = err + last
    total = np.where(diverged, np.inf, total)
    err = np.where(diverged, np.inf, err)
    conv &= ~diverged
    return total, err, conv


def _pack(value, error, converged):
    value = np.asarray(value)
    if value.ndim == 0:
        return QuadratureResult(float(value), float(error), bool(converged))
    return QuadratureResult(value, np.asarray(error), np.asarray(converged))


def integrate_interval(f, a, b, cfg=None, *, breakpoints=None):
    """Integrate f over the finite interval [a, b]."""
    cfg = _resolve(cfg)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate_interval needs finite limits")
    if b == a:
        v = np.asarray(f(np.array([a])), dtype=float)[..., 0] * 0.0
        return _pack(v, np.zeros_like(v), np.ones(v.shape, dtype=bool))
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    v, e, c = _adaptive(f, float(a), float(b), cfg.rel_tol, cfg.abs_tol,
                        cfg.max_subdivisions, breakpoints)
    return _pack(sign * v, e, c)


def integrate_log_scale(G, cfg=None, *, lower=0.0, upper=math.inf, hint=0.0,
                        cap=math.inf, breakpoints=None):
    """Integrate G(u) over [lower, upper) in the logarithmic variable u.

    Infinite upper limits are handled by doubling segments; ``hint`` is a
    point before which truncation is never declared (for integrands whose
    mass sits far out).  ``cap`` bounds the region where G can be evaluated
    at all; mass beyond it is accounted for in the error estimate.
    ``breakpoints`` (offsets from ``lower``) seed the first segment.
    """
    cfg = _resolve(cfg)
    if upper <= lower:
        raise DomainError("upper limit must exceed lower limit")
    top = min(upper, cap)
    if math.isfinite(top) and (math.isfinite(upper) or top - lower <= 1.0):
        v, e, c = _adaptive(lambda s: G(lower + s), 0.0, top - lower, cfg.rel_tol,
                            cfg.abs_tol, cfg.max_subdivisions, breakpoints)
        if top < upper:
            c = np.zeros_like(np.asarray(c))
        return _pack(v, e, c)
    v, e, c = _halfline(lambda s: G(lower + s), cfg.rel_tol, cfg.abs_tol,
                        cfg.max_subdivisions, hint=max(hint - lower, 0.0), cap=top - lower,
                        breakpoints=breakpoints)
    return _pack(v, e, c)


def integrate_radial(g, cfg=None, *, upper=1.0, distance=False):
    """Integrate g(r) over [0, upper] with upper <= 1.

    With ``distance=True`` the integrand receives the distance d = 1 - r
    instead of r, which keeps full relative precision near r = 1.
    """
    cfg = _resolve(cfg)
    if not 0.0 < upper <= 1.0:
        raise DomainError(f"upper limit must lie in (0, 1], got {upper}")
    if not cfg.endpoint_grading:
        if distance:
            f = lambda r: g(1.0 - r)  # noqa: E731
        else:
            f = g
        v, e, c = _adaptive(f, 0.0, float(upper), cfg.rel_tol, cfg.abs_tol,
                            cfg.max_subdivisions)
        return _pack(v, e, c)

    def G(u):
        d = np.exp(-u)
        x = d if distance else -np.expm1(-u)
        return np.asarray(g(x), dtype=float) * d

    u_upper = math.inf if upper == 1.0 else -math.log1p(-upper)
    cap = 700.0 if distance else R_FORM_U_CAP
    res = integrate_log_scale(G, cfg, upper=u_upper, cap=cap)
    if res.ok or u_upper < math.inf or np.ndim(res.value):
        return res

    def logG(u):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(G(u)))

    tail = power_tail(logG, cap)
    if tail is None:
        return res
    return QuadratureResult(res.value + tail[0], res.error + tail[1], True)


def power_tail(logG, cap):
    """(tail, error) of the integral of exp(logG(u)) beyond u = cap when the
    integrand decays like (u + c)^-s with s > 1, else None.

    Mass past the evaluation cap is invisible to the quadrature; power-law
    decay in u (log-type weights) leaves enough of it to matter.  The shift
    c is fitted through three samples, which makes the model exact for
    (1 + u)^-s.
    """
    us = cap * np.array([0.5, 0.75, 1.0])
    g = np.asarray(logG(us), dtype=float).reshape(-1)
    if not np.all(np.isfinite(g)) or not g[0] > g[1] > g[2]:
        return None
    target = (g[0] - g[1]) / (g[1] - g[2])

    def mismatch(c):
        return math.log((us[1] + c) / (us[0] + c)) / math.log((us[2] + c) / (us[1] + c)) - target

    lo, hi = -0.49 * cap, 100.0 * cap
    c = brentq(mismatch, lo, hi) if mismatch(lo) * mismatch(hi) < 0 else 0.0
    s = (g[1] - g[2]) / math.log((us[2] + c) / (us[1] + c))
    s0 = (g[1] - g[2]) / math.log(us[2] / us[1])
    if min(s, s0) <= 1.05:
        return None
    tail = math.exp(g[2]) * (cap + c) / (s - 1)
    plain = math.exp(g[2]) * cap / (s0 - 1)
    return tail, abs(tail - plain) + 1e-3 * tail


def integrate_angular(F, cfg=None, *, symmetric=False):
    """Integrate F(theta) over [0, 2 pi].

    ``F`` may be vector-valued (last axis over theta).  When F(-theta) =
    F(theta), pass ``symmetric`` to integrate over [0, pi] and double.
    """
    cfg = _resolve(cfg)
    b = math.pi if symmetric else 2 * math.pi
    v, e, c = _adaptive(F, 0.0, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions,
                        breakpoints=np.linspace(0.0, b, 9)[1:-1])
    if symmetric:
        v, e = 2 * v, 2 * e
    return _pack(v, e, c)


def integrate_disc(h, radius=1.0, cfg=None):
    """Integrate h over the disc |z| < radius against dA = r dr dtheta."""
    cfg = _resolve(cfg)
    if not 0.0 < radius <= 1.0:
        raise DomainError(f"radius must lie in (0, 1], got {radius}")
    inner = cfg.with_tol(cfg.rel_tol / 10)

    def radial(rho):
        def F(theta):
            z = rho[:, None] * np.exp(1j * theta)[None, :]
            return np.asarray(h(z), dtype=float)

        res = integrate_angular(F, inner)
        return np.asarray(res.value) * rho

    v, e, c = _adaptive(radial, 0.0, float(radius), cfg.rel_tol, cfg.abs_tol,
                        cfg.max_subdivisions)
    return _pack(v, e, c)


def integrate_exp(logf, cfg=None, *, lower=0.0, upper=math.inf, hint=0.0, scale=None,
                  probes=None, cap=math.inf, breakpoints=None):
    """Logarithm of the integral of exp(logf(t)) over [lower, upper).

    The integrand is divided by exp(scale) before integration, so results
    far outside the floating-point range are still obtained to relative
    accuracy.  ``scale`` defaults to the maximum of logf over ``probes``
    (or a generic geometric probe set).  ``cap`` and ``breakpoints``
    (absolute abscissae) are passed on to integrate_log_scale.  Returns a QuadratureResult whose
    value is the log-integral and whose error is the relative error.
    """
    cfg = _resolve(cfg)
    if scale is None:
        if probes is None:
            span = (upper - lower) if math.isfinite(upper) else 2.0**40
            probes = lower + np.unique(np.concatenate([
                [0.0], span * np.geomspace(1e-12, 1.0, 60)]))
            if not math.isfinite(upper):
                probes = probes[probes < 2.0**40 + lower]
        vals = np.asarray(logf(np.asarray(probes, dtype=float)), dtype=float)
        with np.errstate(invalid="ignore"):
            scale = np.max(np.where(np.isnan(vals), -np.inf, vals), axis=-1)
    scale = np.asarray(scale, dtype=float)
    safe = np.where(np.isfinite(scale), scale, 0.0)

    def G(t):
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            v = np.exp(np.asarray(logf(t), dtype=float) - safe[..., None])
        # overflow past the probed scale means the integrand is blowing up;
        # keep it finite so the doubling loop reports divergence
        return np.minimum(np.where(np.isnan(v), 0.0, v), _HUGE)

    rel_cfg = QuadratureConfig(cfg.rel_tol, 0.0, cfg.max_subdivisions, cfg.endpoint_grading)
    # geometric seeding resolves spikes of width down to 1e-12 at the left end
    span = min(upper - lower, 1.0)
    seeds = span * 10.0 ** -np.arange(1, 13)
    if math.isfinite(upper):
        seeds = np.concatenate([seeds, (upper - lower) - seeds])
    if breakpoints is not None:
        seeds = np.concatenate([seeds, np.asarray(breakpoints, dtype=float).ravel() - lower])
    res = integrate_log_scale(G, rel_cfg, lower=lower, upper=upper, hint=hint,
                              cap=cap, breakpoints=seeds)
    val = np.asarray(res.value, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = np.where(np.isfinite(scale), safe + np.log(val), scale)
        rel = np.where(val > 0, np.asarray(res.error) / val, np.inf)
    return _pack(logv, rel, res.converged)


# refinement can stall at the floating-point resolution of shifted abscissae;
# such results are accepted when the estimated relative error stays below this
# multiple of rel_tol
STALL_FACTOR = 1e4


def accept_stalled(res, cfg, what):
    """Raise ConvergenceError unless ``res`` (from integrate_exp) is usable."""
    if res.ok:
        return
    rel = np.asarray(res.error, dtype=float)
    val = np.asarray(res.value, dtype=float)
    if np.all((rel <= STALL_FACTOR * _resolve(cfg).rel_tol) | ~np.isfinite(val)):
        return
    raise ConvergenceError(f"{what} did not converge (relative error {np.nanmax(rel):.3g})")
