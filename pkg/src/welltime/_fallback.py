"""Pure-Python versions of the Gaussian-packet kernels.

Every kernel works in the dimensionless variables u = sigma*kappa and
v = sigma*k0 and returns ``(value, error_estimate)``. The compiled module
``_kernels`` exposes the same functions with the same signatures.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import QuadSpec, integrate_adaptive

S2P = math.sqrt(2.0 / math.pi)
X_TAIL = 6.5  # exp(-2 * 6.5^2) ~ 2e-37
ANGLE_CUT = 4.75  # exp(-2 * 4.75^2) ~ 2e-20
Z_EXPONENT_CUT = 22.5  # exp(-2 * 22.5) ~ 3e-20


def _spec(abs_tol, rel_tol, max_sub):
    return QuadSpec(min(abs_tol, 1e-3), rel_tol, max_sub)


def _sorted_points(points, lo, hi):
    return sorted({p for p in points if lo < p < hi})


def r_plus(u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """v sqrt(2/pi) int_0^inf exp(-2 (x - v)^2) / sqrt(x^2 + u^2) dx, x = u sinh t."""
    pref = v * S2P
    x_max = v + X_TAIL
    t_max = math.asinh(x_max / u)
    pts = [math.asinh(max(v + d, 0.0) / u) for d in (-3.0, -1.0, 0.0, 1.0, 3.0)]
    res = integrate_adaptive(lambda t: np.exp(-2.0 * (u * np.sinh(t) - v) ** 2), 0.0, t_max,
                             _spec(abs_tol / pref, rel_tol, max_sub),
                             points=_sorted_points(pts, 0.0, t_max), label="r_plus")
    return pref * res.value, pref * res.error_estimate


def r_minus(u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """-v sqrt(2/pi) int_0^inf exp(-2 (x + v)^2) / sqrt(x^2 + u^2) dx."""
    pref = v * S2P
    t_max = math.asinh(X_TAIL / u)
    pts = [math.asinh(d / u) for d in (0.5, 2.0)]
    res = integrate_adaptive(lambda t: np.exp(-2.0 * (u * np.sinh(t) + v) ** 2), 0.0, t_max,
                             _spec(abs_tol / pref, rel_tol, max_sub),
                             points=_sorted_points(pts, 0.0, t_max), label="r_minus")
    return -pref * res.value, pref * res.error_estimate


def r_kappa_mantissa(u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """In-well term divided by exp(2(u^2 - v^2)).

    2 v sqrt(2/pi) int_0^{pi/2} exp(-2 u^2 cos^2 th) sin(4 u v sin th) dth
    """
    pref = 2.0 * v * S2P
    half_pi = 0.5 * math.pi
    lo = math.acos(ANGLE_CUT / u) if u > ANGLE_CUT else 0.0
    # about eight panels per oscillation of the sine factor
    n_osc = int(4.0 * u * v * (1.0 - math.sin(lo)) / math.pi) + 1
    pts = list(np.linspace(lo, half_pi, min(n_osc, 200) + 1)[1:-1])
    res = integrate_adaptive(
        lambda th: np.exp(-2.0 * (u * np.cos(th)) ** 2) * np.sin(4.0 * u * v * np.sin(th)),
        lo, half_pi, _spec(abs_tol / pref, rel_tol, max_sub), points=pts, label="r_kappa")
    return pref * res.value, pref * res.error_estimate


def deep_z(u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """z = e^{4iuv} i int_0^inf 2 exp(-2(t^4 + 2 v t^2)) e^{4 i u t^2} / sqrt(t^2 - 2iu) dt."""
    x_max = -v + math.sqrt(v * v + Z_EXPONENT_CUT)
    t_max = math.sqrt(x_max)
    n_osc = int(4.0 * u * x_max / math.pi) + 1
    pts = list(np.sqrt(np.linspace(0.0, x_max, min(n_osc, 200) + 1)[1:-1]))

    def f(t):
        t2 = t * t
        return 2.0 * np.exp(-2.0 * (t2 * t2 + 2.0 * v * t2) + 4j * u * t2) / np.sqrt(t2 - 2j * u)

    res = integrate_adaptive(f, 0.0, t_max, _spec(abs_tol, rel_tol, max_sub), points=pts, label="z")
    phase = complex(math.cos(4 * u * v), math.sin(4 * u * v))
    return 1j * phase * complex(res.value), res.error_estimate


def deep_gamma(u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """int_0^inf exp(-2(x^2 + 2 v x)) / sqrt(x^2 + u^2) dx, x = u sinh s."""
    x_max = -v + math.sqrt(v * v + Z_EXPONENT_CUT)
    s_max = math.asinh(x_max / u)
    pts = [math.asinh(d / u) for d in (0.25 * x_max,)]

    def f(s):
        x = u * np.sinh(s)
        return np.exp(-2.0 * (x * x + 2.0 * v * x))

    res = integrate_adaptive(
        f, 0.0, s_max, _spec(abs_tol, rel_tol, max_sub), points=_sorted_points(pts, 0.0, s_max),
        label="gamma")
    return res.value, res.error_estimate


def batch(name, u, v, abs_tol=1e-13, rel_tol=1e-12, max_sub=2000):
    """Evaluate the named kernel on broadcast arrays of u and v."""
    kernel = _KERNELS[name]
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    vals = np.empty(u.shape, dtype=complex if name == "deep_z" else float)
    errs = np.empty(u.shape)
    for idx in np.ndindex(u.shape):
        vals[idx], errs[idx] = kernel(float(u[idx]), float(v[idx]), abs_tol, rel_tol, max_sub)
    return vals, errs


_KERNELS = {
    "r_plus": r_plus,
    "r_minus": r_minus,
    "r_kappa_mantissa": r_kappa_mantissa,
    "deep_z": deep_z,
    "deep_gamma": deep_gamma,
}
