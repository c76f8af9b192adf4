"""Adaptive quadrature for the refraction integrals.

The engine is a globally adaptive Gauss-Kronrod (10/21 point) scheme that
evaluates integrands on whole batches of panels at once, so integrands are
called with numpy arrays. Error estimates follow the QUADPACK heuristics.

Helpers cover the integral shapes that occur in the time formulas: a finite
integral with 1/sqrt(kappa^2 - k^2) endpoint singularity, a semi-infinite
Gaussian-damped integral with an analytic truncation bound, and straight
complex contour segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadSpec",
    "QuadResult",
    "AccuracyError",
    "integrate_adaptive",
    "integrate_sqrt_singular",
    "integrate_gaussian_tail",
    "integrate_contour_segment",
    "gaussian_tail_bound",
]

# Kronrod 21-point abscissae on [-1, 1] (non-negative half) and weights.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208626518846,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
# full 21-point node list and weights, Gauss weights embedded at odd slots
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(21)
_gauss_pos = np.zeros(11)
_gauss_pos[1:10:2] = _WG
_GW[:10] = _gauss_pos[:-1]
_GW[10:] = _gauss_pos[::-1]

_EPS = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            val = getattr(self, name)
            if not (0.0 < val <= 1e-3):
                raise ValueError("%s must lie in (0, 1e-3]" % name)
        if self.max_subdivisions < 32:
            raise ValueError("max_subdivisions must be >= 32")

    def target(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadSpec()


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error_estimate: float
    evaluations: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value,
                          self.error_estimate + other.error_estimate,
                          self.evaluations + other.evaluations)

    def scaled(self, factor) -> "QuadResult":
        return QuadResult(self.value * factor, self.error_estimate * abs(factor), self.evaluations)


class AccuracyError(ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, best: QuadResult | None = None, label: str | None = None):
        if label:
            message = "%s: %s" % (label, message)
        super().__init__(message)
        self.best = best
        self.label = label


def _gk21(f, a, b):
    """Apply the 21-point rule on panels [a_i, b_i]; returns (Kronrod value, error estimate)."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    kron = (fx @ _KW) * half
    gauss = (fx @ _GW) * half
    absh = np.abs(half)
    resabs = (np.abs(fx) @ _KW) * absh
    mean = kron / np.where(half == 0, 1.0, half) * 0.5
    resasc = (np.abs(fx - mean[:, None]) @ _KW) * absh
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), resasc * scale, err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > _UFLOW / (50 * _EPS), np.maximum(floor, err), err)
    if not np.all(np.isfinite(kron)):
        raise FloatingPointError("integrand produced non-finite values")
    return kron, err, resabs


def _vectorised(f):
    probe = np.array([0.25, 0.75])

    def call(x):
        return f(x)

    try:
        out = np.asarray(f(probe))
        if out.shape == probe.shape:
            return call
    except Exception:  # noqa: BLE001 - scalar-only integrand
        pass
    vf = np.vectorize(f, otypes=[complex])

    def call_scalar(x):
        out = vf(x)
        return out.real if np.all(out.imag == 0) else out

    return call_scalar


def _adaptive_finite(f, edges, spec: QuadSpec, label=None) -> QuadResult:
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    vals, errs, absv = _gk21(f, a, b)
    nevals = 21 * a.size
    while True:
        total = vals.sum()
        err = errs.sum()
        # accept once the estimate is down at the rounding floor of the rule
        if err <= max(spec.target(total), 100.0 * _EPS * absv.sum()):
            return QuadResult(_real_if_close(total), float(err), nevals)
        if a.size >= spec.max_subdivisions:
            best = QuadResult(_real_if_close(total), float(err), nevals)
            raise AccuracyError(
                "no convergence after %d subdivisions (error estimate %.3g)" % (a.size, err),
                best, label)
        thresh = errs.max() / 8.0
        pick = errs >= thresh
        # panels that can no longer be split in floating point stay as they are
        mid = 0.5 * (a + b)
        splittable = (mid > np.minimum(a, b)) & (mid < np.maximum(a, b))
        pick &= splittable
        if not np.any(pick):
            best = QuadResult(_real_if_close(total), float(err), nevals)
            raise AccuracyError("round-off limits the attainable accuracy (error estimate %.3g)" % err,
                                best, label)
        room = spec.max_subdivisions - a.size
        idx = np.flatnonzero(pick)
        if idx.size > room:
            idx = idx[np.argsort(errs[idx])[::-1][:max(room, 1)]]
            pick = np.zeros_like(pick)
            pick[idx] = True
        pa, pb, pm = a[pick], b[pick], mid[pick]
        na = np.concatenate([pa, pm])
        nb = np.concatenate([pm, pb])
        nv, ne, nabs = _gk21(f, na, nb)
        nevals += 21 * na.size
        keep = ~pick
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        absv = np.concatenate([absv[keep], nabs])


def _real_if_close(x):
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        return x
    return float(x)


def integrate_adaptive(f, lo: float, hi: float, spec: QuadSpec = DEFAULT_SPEC,
                       points=None, label: str | None = None) -> QuadResult:
    """Integrate ``f`` over [lo, hi]; ``hi`` may be ``inf``.

    ``points`` lists interior breakpoints (for finite ranges) where the
    integrand has kinks or sharp features.
    """
    if not lo < hi:
        raise ValueError("integrate_adaptive requires lo < hi")
    if math.isinf(lo):
        raise ValueError("only the upper limit may be infinite")
    fv = _vectorised(f)
    if math.isinf(hi):

        def g(t):
            return fv(lo + t / (1.0 - t)) / (1.0 - t) ** 2

        edges = np.array([0.0, 0.5, 0.9, 0.99, 1.0])
        return _adaptive_finite(_guard_endpoint(g), edges, spec, label)
    edges = [lo]
    if points is not None:
        edges.extend(sorted(p for p in points if lo < p < hi))
    edges.append(hi)
    return _adaptive_finite(fv, np.array(edges, dtype=float), spec, label)


def _guard_endpoint(g):
    def wrapped(t):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = g(t)
        return np.where(np.isfinite(out), out, 0.0)

    return wrapped


def integrate_sqrt_singular(f, kappa: float, spec: QuadSpec = DEFAULT_SPEC,
                            points=None, label: str | None = None) -> QuadResult:
    """int_0^kappa f(k)/sqrt(kappa^2 - k^2) dk through k = kappa sin(theta).

    ``points`` are breakpoints in theta.
    """
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    fv = _vectorised(f)
    return integrate_adaptive(lambda th: fv(kappa * np.sin(th)), 0.0, 0.5 * math.pi,
                              spec, points=points, label=label)


def gaussian_tail_bound(amplitude: float, center: float, sigma_eff: float, cut: float) -> float:
    """Bound on int_cut^inf amplitude*exp(-(k-center)^2/(2 sigma_eff^2)) dk."""
    z = (cut - center) / (math.sqrt(2.0) * sigma_eff)
    return amplitude * sigma_eff * math.sqrt(0.5 * math.pi) * math.erfc(z)


def integrate_gaussian_tail(f, center: float, sigma_eff: float, spec: QuadSpec = DEFAULT_SPEC,
                            amplitude: float | None = None, lo: float = 0.0,
                            label: str | None = None, points=None) -> QuadResult:
    """int_lo^inf f(k) dk for an integrand under a Gaussian envelope.

    The range is cut where the analytic tail bound drops below abs_tol/10 and
    the bound is added to the error estimate. ``amplitude`` is the envelope
    constant C in |f| <= C exp(-(k-center)^2 / (2 sigma_eff^2)); when omitted
    it is estimated from samples of the core. ``points`` adds breakpoints
    for features the envelope does not show.
    """
    if not sigma_eff > 0:
        raise ValueError("sigma_eff must be positive")
    fv = _vectorised(f)
    start = max(lo, center)
    if amplitude is None:
        ks = np.linspace(max(lo, center - 8 * sigma_eff), start + 8 * sigma_eff, 161)
        expo = (ks - center) ** 2 / (2 * sigma_eff**2)
        ok = expo < 600
        with np.errstate(all="ignore"):
            samples = np.abs(fv(ks[ok])) * np.exp(expo[ok])
        samples = samples[np.isfinite(samples)]
        amplitude = float(samples.max()) if samples.size else 1.0
    n = 1.0
    while gaussian_tail_bound(amplitude, center, sigma_eff, start + n * sigma_eff) > spec.abs_tol / 10:
        n += 1.0
        if n > 80:
            break
    cut = start + n * sigma_eff
    tail = gaussian_tail_bound(amplitude, center, sigma_eff, cut)
    pts = [p for p in (center - 4 * sigma_eff, center, center + 4 * sigma_eff, *(points or ())) if lo < p < cut]
    res = integrate_adaptive(fv, lo, cut, spec, points=pts, label=label)
    return QuadResult(res.value, res.error_estimate + tail, res.evaluations)


def integrate_contour_segment(g, z_start: complex, z_end: complex, spec: QuadSpec = DEFAULT_SPEC,
                              singular_start: bool = False, label: str | None = None) -> QuadResult:
    """int g(z) dz along the straight line from z_start to z_end.

    With ``singular_start`` the parameter is t = s^2, which removes an inverse
    square-root singularity at z_start.
    """
    z0 = complex(z_start)
    dz = complex(z_end) - z0
    gv = _vectorised(g)
    if singular_start:
        def h(s):
            return gv(z0 + (s * s) * dz) * (2.0 * s) * dz
    else:
        def h(t):
            return gv(z0 + t * dz) * dz
    res = integrate_adaptive(h, 0.0, 1.0, spec, label=label)
    return QuadResult(complex(res.value), res.error_estimate, res.evaluations)
