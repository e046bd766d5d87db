"""Analytic test functions on the unit disc.

A function is held as a truncated Maclaurin series f^(0..N), optionally
backed by closed forms for f and its first derivatives.  Closed forms take
both z and w = 1 - z so that callers near the boundary can supply w
without cancellation.  Radial forms ``log_max_u`` and ``log_area_u``
give log M_inf(r, f) and log Area(f(D(0, r))) as functions of
u = -log(1 - r), which keeps J- and S-type integrands finite however
close to the boundary the quadrature goes.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import kernels
from .errors import ConvergenceError, DomainError, SpecError, TruncationError
from .quadrature import QuadratureConfig, integrate_angular

DEFAULT_DEGREE = 4096
TAIL_TOL = 1e-10
FAMILIES = ("monomial", "log_map", "koebe", "coeffs")
_FLAGS = ("nonneg_coeffs", "univalent", "class_S", "close_to_convex")


@dataclass(frozen=True)
class ClosedForm:
    """Closed expressions for one derivative order.

    ``value(z, w)`` evaluates the function with w = 1 - z; the radial
    forms take u and may be None.
    """

    value: object
    log_max_u: object = None
    log_area_u: object = None


def _one_minus_polar(r, theta, d):
    # 1 - r e^{i theta} = d + r (1 - e^{i theta}), exact as r -> 1
    return d - r * np.expm1(1j * theta)


class AnalyticFunction:
    """Truncated power series with optional closed forms.

    ``exact`` marks a polynomial whose series is the function itself, so
    every radius below 1 is truncation-valid.
    """

    def __init__(self, coeffs, *, label, spec=None, closed=(), flags=(), exact=False):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise SpecError("coefficients must be a non-empty finite sequence")
        self.coeffs = c
        self.coeffs.setflags(write=False)
        self.label = label
        self.spec = spec
        self.closed = tuple(closed)
        self.flags = frozenset(flags)
        unknown = self.flags - set(_FLAGS)
        if unknown:
            raise SpecError(f"unknown function flags {sorted(unknown)}")
        self.exact = bool(exact)
        self._real = bool(np.all(c.imag == 0))
        self._r_max = None
        self._check_flags()
        self._check_closed()

    def __repr__(self):
        return f"AnalyticFunction({self.label}, N={self.truncation_degree})"

    @property
    def truncation_degree(self):
        return self.coeffs.size - 1

    @property
    def closed_eval(self):
        return self.closed[0].value if self.closed else None

    def has_flag(self, name):
        return name in self.flags

    def _check_flags(self):
        c = self.coeffs
        if "nonneg_coeffs" in self.flags and not (self._real and np.all(c.real >= 0)):
            raise SpecError(f"{self.label}: nonneg_coeffs flag with negative or complex coefficients")
        if "class_S" in self.flags:
            if c.size < 2 or c[0] != 0 or c[1] != 1:
                raise SpecError(f"{self.label}: class_S requires f(0)=0 and f'(0)=1")

    def _check_closed(self):
        if not self.closed:
            return
        z = 0.5 * np.exp(2j * np.pi * np.arange(16) / 16)
        series = kernels.horner_complex(self.coeffs, z)
        closed = np.asarray(self.closed[0].value(z, 1.0 - z), dtype=complex)
        scale = max(1.0, float(np.max(np.abs(closed))))
        if np.max(np.abs(series - closed)) > 1e-8 * scale:
            raise SpecError(f"{self.label}: series disagrees with the closed form at |z| = 1/2")

    # ----- truncation validity -----------------------------------------------

    def _tail_ok(self, r):
        """Tail bound below TAIL_TOL times a lower bound for M_1(r, f)."""
        c = self.coeffs
        k = np.arange(c.size)
        with np.errstate(divide="ignore", under="ignore"):
            lower = float(np.max(np.abs(c) * np.exp(k * math.log(r)))) if r > 0 else abs(c[0])
        if "nonneg_coeffs" in self.flags:
            tail = float(self.closed[0].value(np.array(r), np.array(1.0 - r)).real) \
                - float(kernels.horner_real(c.real, np.array(r)))
        else:
            z = r * np.exp(2j * np.pi * np.arange(64) / 64)
            tail = float(np.max(np.abs(self.closed[0].value(z, 1.0 - z)
                                       - kernels.horner_complex(c, z))))
        return abs(tail) < TAIL_TOL * lower

    @property
    def r_max(self):
        """Largest radius at which the series may stand in for f."""
        if self._r_max is None:
            if self.exact:
                self._r_max = 1.0
            elif not self.closed:
                # no reference to measure the tail against: trust the
                # series only where its last terms are negligible
                c = np.abs(self.coeffs)
                n = c.size
                top = max(float(c[n // 2:].max()), 1e-300)
                self._r_max = float(min(1.0, (TAIL_TOL / top) ** (1.0 / (n // 2 + 1))))
            else:
                lo, hi = 0.0, 1.0
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if self._tail_ok(mid):
                        lo = mid
                    else:
                        hi = mid
                self._r_max = lo
        return self._r_max

    def _require_series(self, r, what):
        r = np.asarray(r, dtype=float)
        if np.any(r > self.r_max) and not (self.exact and np.all(r <= 1.0)):
            raise TruncationError(
                f"{what}: radius {float(np.max(r))!r} exceeds the truncation-valid "
                f"radius {self.r_max:.6g} of {self.label} (N={self.truncation_degree})")

    # ----- evaluation ----------------------------------------------------------

    def eval_polar(self, r, theta, d=None):
        """f(r e^{i theta}) with broadcasting; d = 1 - r may be passed exactly."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if d is None:
            d = 1.0 - r
        z = r * np.exp(1j * theta)
        if self.closed:
            return np.asarray(self.closed[0].value(z, _one_minus_polar(r, theta, d)),
                              dtype=complex)
        self._require_series(r, "evaluation")
        return kernels.horner_complex(self.coeffs, z)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("points must lie in the open unit disc")
        if self.closed:
            return np.asarray(self.closed[0].value(z, 1.0 - z), dtype=complex)
        self._require_series(np.abs(z), "evaluation")
        return kernels.horner_complex(self.coeffs, z)

    def log_max_u(self, u):
        """log M_inf(r, f) at r = 1 - exp(-u)."""
        u = np.asarray(u, dtype=float)
        if self.closed and self.closed[0].log_max_u is not None:
            return np.asarray(self.closed[0].log_max_u(u), dtype=float)
        r = -np.expm1(-u)
        with np.errstate(divide="ignore"):
            return np.log(max_modulus(self, r, d=np.maximum(np.exp(-u), 1e-300)))

    def log_area_u(self, u):
        """log Area(f(D(0, r))) at r = 1 - exp(-u), multiplicities counted."""
        u = np.asarray(u, dtype=float)
        if self.closed and self.closed[0].log_area_u is not None:
            return np.asarray(self.closed[0].log_area_u(u), dtype=float)
        r = -np.expm1(-u)
        self._require_series(r, "area")
        k = np.arange(self.coeffs.size, dtype=float)
        b = k * np.abs(self.coeffs) ** 2
        with np.errstate(divide="ignore"):
            return np.log(math.pi * kernels.horner_real(b, r * r))


def derivative(f):
    """f' with coefficients k f^(k) moved to position k - 1."""
    c = f.coeffs
    k = np.arange(1, c.size)
    dc = c[1:] * k if c.size > 1 else np.zeros(1, dtype=complex)
    flags = {"nonneg_coeffs"} & f.flags
    return AnalyticFunction(dc, label=f"{f.label}'", spec=None, closed=f.closed[1:],
                            flags=flags, exact=f.exact)


# ----- means and majorants ------------------------------------------------------


def _mean_p_power(f, p, r, cfg, d=None):
    """M_p(r, f)^p for an array of radii by angular quadrature."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    d = 1.0 - r if d is None else np.atleast_1d(np.asarray(d, dtype=float))

    def F(theta):
        vals = f.eval_polar(r[:, None], theta[None, :], d[:, None])
        with np.errstate(divide="ignore", over="ignore"):
            return np.abs(vals) ** p / (2 * math.pi)

    res = integrate_angular(F, cfg, symmetric=f._real)
    return np.asarray(res.value, dtype=float), np.asarray(res.error, dtype=float), res.converged


def _parseval(f, r):
    r = np.asarray(r, dtype=float)
    return kernels.horner_real(np.abs(f.coeffs) ** 2, r * r)


def integral_mean(f, p, r, cfg=None, *, d=None, cross_check=True):
    """M_p(r, f) = ((1/2 pi) int |f(r e^{i theta})|^p d theta)^(1/p).

    For p = 2 inside the truncation-valid radius the Parseval sum is used
    and, with ``cross_check``, compared against angular quadrature.
    """
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    cfg = cfg or QuadratureConfig.default()
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < 0) | (r_arr >= 1)):
        raise DomainError("radius must lie in [0, 1)")
    if not f.closed:
        f._require_series(r_arr, "integral_mean")
    if p == 2 and np.all(r_arr <= f.r_max):
        val = np.sqrt(_parseval(f, r_arr))
        if cross_check:
            q, _, _ = _mean_p_power(f, 2.0, r_arr, cfg.with_tol(max(cfg.rel_tol, 1e-10)), d)
            if not np.allclose(np.sqrt(q), np.atleast_1d(val), rtol=1e-6, atol=1e-300):
                raise ConvergenceError(f"{f.label}: Parseval and angular quadrature disagree")
        return val if val.ndim else float(val)
    v, _, _ = _mean_p_power(f, p, r_arr, cfg, d)
    out = v ** (1.0 / p)
    return out.reshape(r_arr.shape) if r_arr.ndim else float(out[0])


def _max_on_circle(f, r, d):
    n = max(4 * f.truncation_degree, 256)
    theta = 2 * math.pi * np.arange(n) / n
    vals = np.abs(f.eval_polar(r, theta, d))
    j = int(np.argmax(vals))
    h = 2 * math.pi / n

    def neg(t):
        return -float(np.abs(f.eval_polar(r, np.array([t]), d))[0])

    opt = optimize.minimize_scalar(neg, bounds=(theta[j] - h, theta[j] + h),
                                   method="bounded", options={"xatol": 1e-12})
    return max(float(vals[j]), -float(opt.fun))


def max_modulus(f, r, *, d=None):
    """M_inf(r, f) = max over |z| = r of |f(z)|."""
    r_arr = np.asarray(r, dtype=float)
    d_arr = 1.0 - r_arr if d is None else np.broadcast_to(np.asarray(d, dtype=float),
                                                          r_arr.shape)
    # r may round to 1 when the exact distance d > 0 is supplied
    if np.any((r_arr < 0) | (r_arr > 1) | (d_arr <= 0)):
        raise DomainError("radius must lie in [0, 1)")
    if not f.closed:
        f._require_series(r_arr, "max_modulus")
    if "nonneg_coeffs" in f.flags:
        out = np.abs(f.eval_polar(r_arr, np.zeros_like(r_arr), d_arr))
    else:
        flat_r, flat_d = r_arr.ravel(), d_arr.ravel()
        out = np.array([_max_on_circle(f, flat_r[i], flat_d[i]) for i in range(flat_r.size)])
        out = out.reshape(r_arr.shape)
    return out if r_arr.ndim else float(out)


def taylor_majorant(f, r):
    """P(r, f) = sum over n >= 1 of |f^(n)| r^n."""
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < 0) | (r_arr >= 1)):
        raise DomainError("radius must lie in [0, 1)")
    if "nonneg_coeffs" in f.flags and f.closed:
        out = f.eval_polar(r_arr, np.zeros_like(r_arr)).real - f.coeffs[0].real
    else:
        f._require_series(r_arr, "taylor_majorant")
        a = np.abs(f.coeffs).copy()
        a[0] = 0.0
        out = kernels.horner_real(a, r_arr)
    return out if r_arr.ndim else float(out)


# ----- built-in families ---------------------------------------------------------


def _log_r(u):
    return np.log1p(-np.exp(-u))


def _clog1p(x):
    """log(1 + x) for complex x, accurate for small |x|."""
    re, im = x.real, x.imag
    return 0.5 * np.log1p(2 * re + re * re + im * im) + 1j * np.arctan2(im, 1 + re)


def _log_map_forms():
    def f0(z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        # w carries the boundary accuracy, -z the accuracy near the origin
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(np.abs(z) < 0.5, -_clog1p(-z), -np.log(w))

    def area0(u):
        # pi * sum r^{2k}/k = -pi log(1 - r^2), 1 - r^2 = d (1 + r)
        r = -np.expm1(-u)
        return math.log(math.pi) + np.log(u - np.log1p(r))

    def area1(u):
        # pi * sum k r^{2k} = pi x / (1 - x)^2
        r = -np.expm1(-u)
        return math.log(math.pi) + 2 * _log_r(u) + 2 * u - 2 * np.log1p(r)

    forms = [ClosedForm(f0, lambda u: np.log(u), area0),
             ClosedForm(lambda z, w: 1.0 / w, lambda u: u, area1)]
    fact = 1.0
    for m in range(2, 6):
        fact *= m - 1
        forms.append(ClosedForm(
            (lambda c, m: lambda z, w: c / w ** m)(fact, m),
            (lambda c, m: lambda u: math.log(c) + m * u)(fact, m)))
    return forms


def _koebe_forms():
    def area0(u):
        # pi * sum k^3 x^k = pi x (1 + 4x + x^2) / (1 - x)^4 with x = r^2
        r = -np.expm1(-u)
        x = r * r
        return (math.log(math.pi) + 2 * _log_r(u) + np.log(1 + 4 * x + x * x)
                + 4 * u - 4 * np.log1p(r))

    return [
        ClosedForm(lambda z, w: z / w ** 2, lambda u: _log_r(u) + 2 * u, area0),
        ClosedForm(lambda z, w: (1 + z) / w ** 3,
                   lambda u: np.log1p(-np.expm1(-u)) + 3 * u),
        ClosedForm(lambda z, w: (4 + 2 * z) / w ** 4,
                   lambda u: np.log(4 - 2 * np.expm1(-u)) + 4 * u),
        ClosedForm(lambda z, w: (18 + 6 * z) / w ** 5,
                   lambda u: np.log(18 - 6 * np.expm1(-u)) + 5 * u),
    ]


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """Serializable description ``{family, params, truncation_degree}``."""

    family: str
    params: dict = field(default_factory=dict)
    truncation_degree: int = None

    def to_dict(self):
        return {"family": self.family, "params": dict(self.params),
                "truncation_degree": self.truncation_degree}

    def __eq__(self, other):
        return isinstance(other, FunctionSpec) and self.to_dict() == other.to_dict()

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "family" not in d:
            raise SpecError(f"function spec needs a 'family' field: {d!r}")
        if d["family"] not in FAMILIES:
            raise SpecError(f"unknown function family {d['family']!r}")
        n = d.get("truncation_degree")
        return cls(d["family"], dict(d.get("params", {})), None if n is None else int(n))

    @classmethod
    def parse(cls, text):
        """Parse ``monomial:n``, ``log_map``, ``koebe``, ``coeffs:a,b,...``,
        inline JSON or ``@file.json``."""
        text = text.strip()
        if text.startswith("@"):
            try:
                with open(text[1:]) as fh:
                    return cls.from_dict(json.load(fh))
            except OSError as exc:
                raise SpecError(f"cannot read function spec file: {exc}") from None
        if text.startswith("{"):
            try:
                return cls.from_dict(json.loads(text))
            except json.JSONDecodeError as exc:
                raise SpecError(f"malformed function JSON: {exc}") from None
        name, _, arg = text.partition(":")
        try:
            if name in ("monomial", "m"):
                return cls("monomial", {"n": int(arg)})
            if name in ("log_map", "koebe") and not arg:
                return cls(name)
            if name == "coeffs":
                vals = [complex(s.strip().replace(" ", "")) for s in arg.split(",")]
                vals = [v.real if v.imag == 0 else [v.real, v.imag] for v in vals]
                return cls("coeffs", {"values": vals})
        except ValueError:
            raise SpecError(f"malformed function spec {text!r}") from None
        raise SpecError(f"malformed function spec {text!r}")

    @classmethod
    def coerce(cls, obj):
        if isinstance(obj, FunctionSpec):
            return obj
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, dict):
            return cls.from_dict(obj)
        raise SpecError(f"cannot interpret {obj!r} as a function spec")


def _coeff_values(values):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise SpecError(f"complex coefficient must be [re, im], got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(v))
    return np.array(out, dtype=complex)


def make_function(spec):
    """Build the analytic function described by ``spec``."""
    spec = FunctionSpec.coerce(spec)
    N = spec.truncation_degree
    if N is not None and N < 1:
        raise SpecError(f"truncation_degree must be at least 1, got {N}")
    fam, params = spec.family, spec.params
    if fam == "monomial":
        n = params.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise SpecError(f"monomial degree must be a non-negative integer, got {n!r}")
        if N is not None and N < n:
            raise SpecError(f"truncation_degree {N} cannot represent z^{n}")
        c = np.zeros(max(n, N or 1) + 1)
        c[n] = 1.0
        flags = {"nonneg_coeffs"}
        if n == 1:
            flags |= {"univalent", "class_S", "close_to_convex"}
        return AnalyticFunction(c, label=f"m_{n}", spec=spec, flags=flags, exact=True)
    if fam in ("log_map", "koebe"):
        N = N or DEFAULT_DEGREE
        k = np.arange(N + 1, dtype=float)
        if fam == "log_map":
            c = np.zeros(N + 1)
            c[1:] = 1.0 / k[1:]
            closed = _log_map_forms()
        else:
            c = k
            closed = _koebe_forms()
        flags = {"nonneg_coeffs", "univalent", "class_S", "close_to_convex"}
        return AnalyticFunction(c, label=fam, spec=spec, closed=closed, flags=flags)
    if fam == "coeffs":
        c = _coeff_values(params.get("values", []))
        if c.size == 0:
            raise SpecError("coeffs family needs at least one coefficient")
        if N is not None and N < c.size - 1:
            raise SpecError(f"truncation_degree {N} shorter than the coefficient list")
        if N is not None:
            c = np.concatenate([c, np.zeros(N + 1 - c.size)])
        flags = set()
        if np.all(c.imag == 0) and np.all(c.real >= 0):
            flags.add("nonneg_coeffs")
        label = "coeffs[" + ",".join(_fmt(v) for v in c[:8]) + (",..." if c.size > 8 else "") + "]"
        return AnalyticFunction(c, label=label, spec=spec, flags=flags, exact=True)
    raise SpecError(f"unknown function family {fam!r}")


def _fmt(v):
    if v.imag == 0:
        return f"{v.real:g}"
    return f"{v.real:g}{v.imag:+g}j"
