"""Special functions used by the time kernels and the closed forms.

All routines accept scalars or numpy arrays and return the same shape.
Power series are used for small arguments and asymptotic expansions (or an
exact integral representation) for large ones; the switchover constants are
module-level so they can be inspected.

Unscaled forms that would overflow a double raise ``OverflowError``; use the
``*_scaled`` or ``*_log`` variants in that regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SeriesControl",
    "bessel_i0",
    "bessel_i0_scaled",
    "bessel_i0_complex",
    "bessel_i1_scaled",
    "bessel_j0",
    "erfi",
    "erfi_scaled",
    "erfi_log",
    "dawson",
    "struve_h0",
    "struve_l0",
    "struve_l0_scaled",
    "struve_l1",
    "struve_l1_scaled",
    "hyp0f1_1",
    "csgn",
]

# switchover points
I0_SERIES_MAX = 20.0  # asymptotic tail ~ e^{-2x}, below 1e-17 beyond here
J0_SERIES_MAX = 8.0
J0_MILLER_MAX = 25.0
ERFI_SERIES_MAX = 6.0  # asymptotic Dawson error ~ e^{-x^2}
H0_SERIES_MAX = 10.0
L_SERIES_MAX = 30.0
EXP_MAX = 709.0

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI


@dataclass(frozen=True)
class SeriesControl:
    """Termination policy for power-series loops."""

    max_terms: int = 400
    rel_tol: float = 1e-17

    def __post_init__(self):
        if self.max_terms < 16:
            raise ValueError("max_terms must be >= 16")
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError("rel_tol must lie in (0, 1e-3]")


DEFAULT_SERIES = SeriesControl()


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _sum_series(first, ratio, control):
    """Sum a series given its first term and a callable ``ratio(n, term)``."""
    term = first
    total = first.copy()
    for n in range(1, control.max_terms):
        term = ratio(n, term)
        total = total + term
        if np.all(np.abs(term) <= control.rel_tol * np.abs(total)):
            break
    return total


# --------------------------------------------------------------------------
# modified Bessel I0, I1


def _i0_series(x, control):
    t = 0.25 * x * x
    return _sum_series(np.ones_like(x), lambda n, term: term * t / (n * n), control)


def _i_asym_scaled(x, nu):
    """e^{-x} I_nu(x) for large positive x."""
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 40):
        new = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if np.all(np.abs(new) >= np.abs(term)):
            break
        term = new
        total = total + term
    return total / np.sqrt(2.0 * math.pi * x)


def bessel_i0_scaled(x, control: SeriesControl = DEFAULT_SERIES):
    """Exponentially scaled modified Bessel function e^{-|x|} I0(x)."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= I0_SERIES_MAX
    if np.any(small):
        xs = ax[small]
        out[small] = np.exp(-xs) * _i0_series(xs, control)
    if np.any(~small):
        out[~small] = _i_asym_scaled(ax[~small], 0.0)
    return _ret(out, scalar)


def bessel_i0(x, control: SeriesControl = DEFAULT_SERIES):
    """Modified Bessel function of the first kind, order zero."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    if np.any(ax > EXP_MAX):
        raise OverflowError("I0 overflows for |x| > %g; use bessel_i0_scaled" % EXP_MAX)
    out = np.empty_like(ax)
    small = ax <= I0_SERIES_MAX
    if np.any(small):
        out[small] = _i0_series(ax[small], control)
    if np.any(~small):
        xl = ax[~small]
        out[~small] = _i_asym_scaled(xl, 0.0) * np.exp(xl)
    return _ret(out, scalar)


def bessel_i1_scaled(x, control: SeriesControl = DEFAULT_SERIES):
    """e^{-|x|} I1(x); odd in x."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= I0_SERIES_MAX
    if np.any(small):
        xs = ax[small]
        t = 0.25 * xs * xs
        s = _sum_series(0.5 * xs, lambda n, term: term * t / (n * (n + 1)), control)
        out[small] = np.exp(-xs) * s
    if np.any(~small):
        out[~small] = _i_asym_scaled(ax[~small], 1.0)
    return _ret(np.sign(arr) * out, scalar)


def bessel_i0_complex(z, control: SeriesControl = DEFAULT_SERIES):
    """I0 for complex argument by its Maclaurin series (moderate |z| only)."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr.real) > EXP_MAX):
        raise OverflowError("I0 overflows for |Re z| > %g" % EXP_MAX)
    t = 0.25 * arr * arr
    term = np.ones_like(arr)
    total = np.ones_like(arr)
    n_needed = int(np.max(np.abs(arr), initial=0.0)) + 40
    for n in range(1, max(control.max_terms, n_needed)):
        term = term * t / (n * n)
        total = total + term
        if n > np.max(np.abs(arr), initial=0.0) and np.all(np.abs(term) <= control.rel_tol * np.abs(total)):
            break
    return complex(total) if arr.ndim == 0 else total


# --------------------------------------------------------------------------
# Bessel J0


def _j0_series(x, control):
    t = 0.25 * x * x
    return _sum_series(np.ones_like(x), lambda n, term: -term * t / (n * n), control)


def _j0_miller(x):
    # backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1}, normalised by
    # J0 + 2 sum J_{2k} = 1
    top = 2 * (int(np.max(x)) // 2) + 60
    jp1 = np.zeros_like(x)
    jn = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for n in range(top, 0, -1):
        jm1 = (2.0 * n / x) * jn - jp1
        jp1, jn = jn, jm1
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm = norm + 2.0 * jn
        big = np.abs(jn) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            jn, jp1, norm = jn * scale, jp1 * scale, norm * scale
    norm = norm + jn
    return jn / norm


def _j0_asym(x):
    chi = x - 0.25 * math.pi
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = 1.0
    for k in range(1, 30):
        a = a * (2 * k - 1) ** 2 / (8.0 * k)
        term = a / x**k
        if k % 4 == 1:
            q = q - term
        elif k % 4 == 2:
            p = p - term
        elif k % 4 == 3:
            q = q + term
        else:
            p = p + term
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j0(x, control: SeriesControl = DEFAULT_SERIES):
    """Bessel function of the first kind, order zero."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    s = ax <= J0_SERIES_MAX
    m = (ax > J0_SERIES_MAX) & (ax <= J0_MILLER_MAX)
    a = ax > J0_MILLER_MAX
    if np.any(s):
        out[s] = _j0_series(ax[s], control)
    if np.any(m):
        out[m] = _j0_miller(ax[m])
    if np.any(a):
        out[a] = _j0_asym(ax[a])
    return _ret(out, scalar)


# --------------------------------------------------------------------------
# erfi and Dawson


def _erfi_series(x, control):
    # (2/sqrt(pi)) sum x^{2n+1} / (n! (2n+1)); all terms share the sign of x
    x2 = x * x
    term = x.copy()  # x^{2n+1}/n!
    total = x.copy()
    for n in range(1, control.max_terms):
        term = term * x2 / n
        add = term / (2 * n + 1)
        total = total + add
        if np.all(np.abs(add) <= control.rel_tol * np.abs(total)):
            break
    return _TWO_OVER_SQRT_PI * total


def _dawson_asym(x):
    # F(x) ~ 1/(2x) sum (2k-1)!! / (2x^2)^k
    inv = 1.0 / (2.0 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        new = term * (2 * k - 1) * inv
        if np.all(np.abs(new) >= np.abs(term)):
            break
        term = new
        total = total + term
    return total / (2.0 * x)


def erfi_scaled(x, control: SeriesControl = DEFAULT_SERIES):
    """e^{-x^2} erfi(x), finite for every real x."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    s = ax <= ERFI_SERIES_MAX
    if np.any(s):
        xs = ax[s]
        out[s] = np.exp(-xs * xs) * _erfi_series(xs, control)
    if np.any(~s):
        out[~s] = _TWO_OVER_SQRT_PI * _dawson_asym(ax[~s])
    return _ret(np.sign(arr) * out, scalar)


def dawson(x, control: SeriesControl = DEFAULT_SERIES):
    """Dawson's integral F(x) = e^{-x^2} int_0^x e^{t^2} dt."""
    return 0.5 * _SQRT_PI * erfi_scaled(x, control)


def erfi(x, control: SeriesControl = DEFAULT_SERIES):
    """Imaginary error function (2/sqrt(pi)) int_0^x e^{t^2} dt."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    if np.any(ax * ax > EXP_MAX):
        raise OverflowError("erfi overflows for |x| > %.3f; use erfi_log" % math.sqrt(EXP_MAX))
    out = np.empty_like(ax)
    s = ax <= ERFI_SERIES_MAX
    if np.any(s):
        out[s] = _erfi_series(ax[s], control)
    if np.any(~s):
        xl = ax[~s]
        out[~s] = _TWO_OVER_SQRT_PI * _dawson_asym(xl) * np.exp(xl * xl)
    return _ret(np.sign(arr) * out, scalar)


def erfi_log(x, control: SeriesControl = DEFAULT_SERIES):
    """Return ``(log|erfi(x)|, sign)``; usable far beyond the overflow point."""
    arr, scalar = _as_array(x)
    sc = np.abs(erfi_scaled(arr, control))
    with np.errstate(divide="ignore"):
        logmag = arr * arr + np.log(sc)
    sign = np.sign(arr)
    if scalar:
        return float(logmag), float(sign)
    return logmag, sign


# --------------------------------------------------------------------------
# Struve functions


def _struve_series(x, nu, alternating, control):
    # sum (+-1)^k (x/2)^{2k+nu+1} / (Gamma(k+3/2) Gamma(k+nu+3/2))
    h = 0.5 * x
    first = h ** (nu + 1) / (math.gamma(1.5) * math.gamma(nu + 1.5))
    sgn = -1.0 if alternating else 1.0
    return _sum_series(
        first,
        lambda k, term: sgn * term * h * h / ((k + 0.5) * (k + nu + 0.5)),
        control,
    )


def _struve_h0_quad(x):
    # H0(x) = (2/pi) int_0^{pi/2} sin(x sin t) dt, Gauss-Legendre
    n = int(np.max(x)) + 60
    nodes, weights = np.polynomial.legendre.leggauss(n)
    t = 0.25 * math.pi * (nodes + 1.0)
    vals = np.sin(np.multiply.outer(x, np.sin(t)))
    return (2.0 / math.pi) * 0.25 * math.pi * (vals @ weights)


def _struve_l_minus_i(x, nu):
    # L_nu(x) - I_{-nu}(x) ~ (1/pi) sum_k (-1)^{k+1} Gamma(k+1/2) (x/2)^{nu-2k-1} / Gamma(nu+1/2-k)
    total = np.zeros_like(x)
    prev = None
    for k in range(0, 20):
        coef = (-1) ** (k + 1) * math.gamma(k + 0.5) / math.gamma(nu + 0.5 - k)
        term = coef * (0.5 * x) ** (nu - 2 * k - 1)
        if prev is not None and np.all(np.abs(term) >= np.abs(prev)):
            break
        total = total + term
        prev = term
    return total / math.pi


def struve_h0(x, control: SeriesControl = DEFAULT_SERIES):
    """Struve function H0; odd in x."""
    arr, scalar = _as_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    s = ax <= H0_SERIES_MAX
    if np.any(s):
        out[s] = _struve_series(ax[s], 0, True, control)
    if np.any(~s):
        out[~s] = _struve_h0_quad(ax[~s])
    return _ret(np.sign(arr) * out, scalar)


def _struve_l_scaled(ax, nu, control):
    out = np.empty_like(ax)
    s = ax <= L_SERIES_MAX
    if np.any(s):
        xs = ax[s]
        out[s] = np.exp(-xs) * _struve_series(xs, nu, False, control)
    if np.any(~s):
        xl = ax[~s]
        i_scaled = bessel_i0_scaled(xl, control) if nu == 0 else bessel_i1_scaled(xl, control)
        out[~s] = i_scaled + np.exp(-xl) * _struve_l_minus_i(xl, nu)
    return out


def struve_l0_scaled(x, control: SeriesControl = DEFAULT_SERIES):
    """e^{-|x|} L0(x); odd in x."""
    arr, scalar = _as_array(x)
    return _ret(np.sign(arr) * _struve_l_scaled(np.abs(arr), 0, control), scalar)


def struve_l1_scaled(x, control: SeriesControl = DEFAULT_SERIES):
    """e^{-|x|} L1(x); even in x."""
    arr, scalar = _as_array(x)
    return _ret(_struve_l_scaled(np.abs(arr), 1, control), scalar)


def struve_l0(x, control: SeriesControl = DEFAULT_SERIES):
    """Modified Struve function L0."""
    arr, scalar = _as_array(x)
    if np.any(np.abs(arr) > EXP_MAX):
        raise OverflowError("L0 overflows for |x| > %g" % EXP_MAX)
    ax = np.abs(arr)
    return _ret(np.sign(arr) * _struve_l_scaled(ax, 0, control) * np.exp(ax), scalar)


def struve_l1(x, control: SeriesControl = DEFAULT_SERIES):
    """Modified Struve function L1."""
    arr, scalar = _as_array(x)
    if np.any(np.abs(arr) > EXP_MAX):
        raise OverflowError("L1 overflows for |x| > %g" % EXP_MAX)
    ax = np.abs(arr)
    return _ret(_struve_l_scaled(ax, 1, control) * np.exp(ax), scalar)


# --------------------------------------------------------------------------


def hyp0f1_1(z, control: SeriesControl = DEFAULT_SERIES):
    """0F1(;1;z): I0(2 sqrt z) for z >= 0 and J0(2 sqrt(-z)) for z < 0."""
    arr, scalar = _as_array(z)
    out = np.empty_like(arr)
    pos = arr >= 0
    if np.any(pos):
        out[pos] = bessel_i0(2.0 * np.sqrt(arr[pos]), control)
    if np.any(~pos):
        out[~pos] = bessel_j0(2.0 * np.sqrt(-arr[~pos]), control)
    return _ret(out, scalar)


def csgn(z) -> int:
    """Complex sign: sign of Re z, or of Im z when Re z == 0; csgn(0) = 0."""
    z = complex(z)
    if z.real > 0:
        return 1
    if z.real < 0:
        return -1
    if z.imag > 0:
        return 1
    if z.imag < 0:
        return -1
    return 0
