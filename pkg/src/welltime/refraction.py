"""Effective index of refraction of the well, the free correction factor Q
and the barrier index, with independent routes for cross-checking.

Momentum-space route (the production path)::

    R = k0 int_0^inf rho(k)/sqrt(k^2+kappa^2) dk
      - k0 int_0^inf rho(-k)/sqrt(k^2+kappa^2) dk
      + k0 int_0^kappa W(k)/sqrt(kappa^2-k^2) dk

with rho = |psi(k)|^2 and W(k) = Im[2 psi(ik) conj(psi(-ik))]. The in-well
term enters with a plus sign; that is the sign that agrees with the
zeta-space integral k0 int Phi(zeta) I0(kappa zeta) sin(k0 zeta) dzeta.

For Gaussian packets everything depends on u = sigma*kappa and v = sigma*k0
and the integrals are evaluated by the kernels in ``welltime.kernels``. The
in-well term grows like E = exp(2(u^2 - v^2)); it is carried as a mantissa
times E and only multiplied out at the end.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .domain import DomainError
from .packet import SQRT_2_OVER_PI, GaussianPacket, PacketSpectrum
from .quadrature import (
    DEFAULT_SPEC,
    QuadResult,
    QuadSpec,
    integrate_adaptive,
    integrate_contour_segment,
    integrate_sqrt_singular,
)
from .specfun import bessel_i0_scaled

LOG_OVERFLOW = 709.0
TINY_U = 1e-30  # below this sigma*kappa the well is indistinguishable from free space


class Method(enum.Enum):
    MOMENTUM_SPACE = "momentum-space"
    ZETA_ORACLE = "zeta-oracle"
    DEEP_WELL_FORM = "deep-well-form"


class ConsistencyError(ArithmeticError):
    """Two routes that must agree did not."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class RefractionResult:
    r_plus: float
    r_minus: float
    r_kappa: float
    total: float
    q_free: float
    method: Method
    error_estimate: float
    log_scale: float = 0.0  # r_kappa = r_kappa_mantissa * exp(log_scale)
    r_kappa_mantissa: float = float("nan")

    def __post_init__(self):
        parts = self.r_plus + self.r_minus + self.r_kappa
        scale = max(1.0, abs(self.r_plus), abs(self.r_minus), abs(self.r_kappa))
        if abs(parts - self.total) > 1e-12 * scale:
            raise ValueError("total must equal r_plus + r_minus + r_kappa")
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be non-negative")

    def as_dict(self) -> dict:
        return {
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "r_kappa": self.r_kappa,
            "total": self.total,
            "q_free": self.q_free,
            "method": self.method.value,
            "error_estimate": self.error_estimate,
        }


def _check_inputs(s: PacketSpectrum, k0: float, kappa: float, name="kappa"):
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    if not kappa >= 0:
        raise DomainError("%s must be non-negative" % name)
    if not getattr(s, "is_entire", False):
        raise DomainError("only entire (pole-free) momentum spectra are supported")


def _gaussian_fast_path(s, k0) -> bool:
    return isinstance(s, GaussianPacket) and s.k0 == k0


def _tail_sigmas(s: PacketSpectrum, k0: float, spec: QuadSpec) -> float:
    """Number of momentum widths beyond which the density is negligible."""
    amp = k0 * s.density_peak * s.momentum_width * math.sqrt(0.5 * math.pi)
    n = 4.0
    while amp * math.erfc(n / math.sqrt(2.0)) > spec.abs_tol / 10 and n < 40:
        n += 1.0
    return n


def _mantissa_tol(abs_tol: float, log_scale: float) -> float:
    """Absolute tolerance for a mantissa that is later multiplied by e^log_scale."""
    scaled = abs_tol * math.exp(-max(min(log_scale, LOG_OVERFLOW), -LOG_OVERFLOW))
    return min(max(scaled, 1e-16), 1e-3)


def _kernel_spec(spec: QuadSpec):
    return spec.abs_tol, spec.rel_tol, spec.max_subdivisions


# --------------------------------------------------------------------------
# free correction factor Q


def free_q_zeta(s: PacketSpectrum, k0: float, quad: QuadSpec = DEFAULT_SPEC) -> QuadResult:
    """k0 int_0^inf Im[Phi(zeta) e^{i k0 zeta}] dzeta."""
    w = s.autocorrelation_width
    z_max = 12.0 * w

    def f(z):
        lp = s.log_autocorrelation(z)
        return np.exp(lp.real) * np.sin(k0 * z + lp.imag)

    pts = _oscillation_points(k0, 0.0, z_max)
    return integrate_adaptive(f, 0.0, z_max, quad, points=pts, label="free_q_zeta").scaled(k0)


def free_q_momentum(s: PacketSpectrum, k0: float, quad: QuadSpec = DEFAULT_SPEC) -> QuadResult:
    """k0 int_0^inf (rho(k) - rho(-k))/k dk."""
    n = _tail_sigmas(s, k0, quad)
    sm = s.momentum_width
    k_max = max(abs(s.k0), 0.0) + n * sm

    def f(k):
        return (s.momentum_density(k) - s.momentum_density(-k)) / k

    pts = [p for p in (abs(s.k0) - 4 * sm, abs(s.k0), abs(s.k0) + 4 * sm) if 0 < p < k_max]
    return integrate_adaptive(f, 0.0, k_max, quad, points=pts, label="free_q_momentum").scaled(k0)


def free_q(s: PacketSpectrum, k0: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """Free correction factor Q.

    Gaussian packets use the closed form 2 sqrt(2) v F(sqrt(2) v) (F is
    Dawson's integral); other spectra use the zeta-space quadrature.
    """
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    if _gaussian_fast_path(s, k0):
        return s.free_q_closed()
    return float(free_q_zeta(s, k0, quad).value)


def _oscillation_points(freq, lo, hi, cap=2000):
    n = int(freq * (hi - lo) / math.pi)
    if n < 2:
        return None
    n = min(n, cap)
    return list(np.linspace(lo, hi, n + 1)[1:-1])


# --------------------------------------------------------------------------
# generic momentum-space pieces


def _real_axis_integral(s: PacketSpectrum, sign: int, kappa: float, k_lo: float, k0: float,
                        quad: QuadSpec, label: str) -> QuadResult:
    """int_{k_lo}^inf rho(sign*k)/sqrt(k^2+kappa^2) dk via k = kappa sinh t."""
    n = _tail_sigmas(s, k0, quad)
    sm = s.momentum_width
    centre = sign * s.k0
    k_max = max(centre, k_lo, 0.0) + n * sm
    t_lo = math.asinh(k_lo / kappa)
    t_hi = math.asinh(k_max / kappa)
    if not t_hi > t_lo:
        return QuadResult(0.0, 0.0, 0)
    pts = [math.asinh(max(centre + d * sm, 0.0) / kappa) for d in (-3.0, -1.0, 0.0, 1.0, 3.0)]
    pts = sorted({p for p in pts if t_lo < p < t_hi})

    def f(t):
        return s.momentum_density(sign * kappa * np.sinh(t))

    return integrate_adaptive(f, t_lo, t_hi, quad, points=pts, label=label)


def _in_well_mantissa(s: PacketSpectrum, kappa: float, quad: QuadSpec):
    """(mantissa QuadResult, log_scale) for int_0^kappa W/sqrt(kappa^2-k^2)."""
    grid = np.linspace(0.0, kappa, 257)
    env, _ = s.log_imag_axis_weight(grid)
    log_scale = float(np.max(env))

    def f(k):
        e, fac = s.log_imag_axis_weight(k)
        return np.exp(e - log_scale) * fac

    pts = list(np.linspace(0.0, 0.5 * math.pi, 33)[1:-1])
    res = integrate_sqrt_singular(f, kappa, quad, points=pts, label="r_kappa")
    return res, log_scale


def _combine(r_plus, r_minus, mant, log_scale, err, q, method, k0_factor=1.0):
    if log_scale > LOG_OVERFLOW:
        raise OverflowError("in-well term overflows (log scale %.1f); use r_kappa_log" % log_scale)
    scale = math.exp(log_scale)
    r_kappa = mant * scale
    total = r_plus + r_minus + r_kappa
    if not math.isfinite(total):
        raise OverflowError("refraction index is not representable")
    return RefractionResult(r_plus, r_minus, r_kappa, total, q, method, err, log_scale, mant)


def well_refraction(s: PacketSpectrum, k0: float, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> RefractionResult:
    """Effective index of refraction R = R+ + R- + R_kappa (momentum space)."""
    _check_inputs(s, k0, kappa)
    q = free_q(s, k0, quad)
    if kappa == 0:
        # same routine as free_q; R+ and R- diverge separately at kappa = 0
        return RefractionResult(q, 0.0, 0.0, q, q, Method.MOMENTUM_SPACE, 0.0, 0.0, 0.0)
    u = 0.5 * kappa / s.momentum_width  # sigma*kappa for a Gaussian
    if u < TINY_U:
        # R - Q = u^2 [4 v^2 (1 - Q) + Q] + O(u^4), far below rounding here
        v = 0.5 * k0 / s.momentum_width
        bound = u * u * (4.0 * v * v * abs(1.0 - q) + abs(q))
        return RefractionResult(q, 0.0, 0.0, q, q, Method.MOMENTUM_SPACE, bound, 0.0, 0.0)
    if _gaussian_fast_path(s, k0):
        u, v = s.sigma * kappa, s.sigma * k0
        log_scale = 2.0 * (u * u - v * v)
        a_tol, r_tol, n_sub = _kernel_spec(quad)
        rp, ep = kernels.r_plus(u, v, a_tol, r_tol, n_sub)
        rm, em = kernels.r_minus(u, v, a_tol, r_tol, n_sub)
        mk, ek = kernels.r_kappa_mantissa(u, v, _mantissa_tol(a_tol, log_scale), r_tol, n_sub)
        err = ep + em + ek * math.exp(min(log_scale, LOG_OVERFLOW))
        return _combine(rp, rm, mk, log_scale, err, q, Method.MOMENTUM_SPACE)
    plus = _real_axis_integral(s, 1, kappa, 0.0, k0, quad, "r_plus").scaled(k0)
    minus = _real_axis_integral(s, -1, kappa, 0.0, k0, quad, "r_minus").scaled(-k0)
    mant, log_scale = _in_well_mantissa(s, kappa, quad)
    mant = mant.scaled(k0)
    err = plus.error_estimate + minus.error_estimate + mant.error_estimate * math.exp(min(log_scale, LOG_OVERFLOW))
    return _combine(float(plus.value), float(minus.value), float(mant.value), log_scale, err, q,
                    Method.MOMENTUM_SPACE)


def r_kappa_log(s: PacketSpectrum, k0: float, kappa: float, quad: QuadSpec = DEFAULT_SPEC):
    """In-well term as ``(log|R_kappa|, sign)``; never overflows."""
    _check_inputs(s, k0, kappa)
    if kappa == 0:
        return -math.inf, 0.0
    if _gaussian_fast_path(s, k0):
        u, v = s.sigma * kappa, s.sigma * k0
        log_scale = 2.0 * (u * u - v * v)
        a_tol, r_tol, n_sub = _kernel_spec(quad)
        mk, _ = kernels.r_kappa_mantissa(u, v, _mantissa_tol(a_tol, log_scale), r_tol, n_sub)
    else:
        res, log_scale = _in_well_mantissa(s, kappa, quad)
        mk = k0 * float(res.value)
    if mk == 0:
        return -math.inf, 0.0
    return log_scale + math.log(abs(mk)), math.copysign(1.0, mk)


# --------------------------------------------------------------------------
# zeta-space oracle


def zeta_oracle_refraction(s: PacketSpectrum, k0: float, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """R from k0 int_0^inf Im[Phi(zeta) e^{i k0 zeta}] I0(kappa zeta) dzeta.

    Independent of the momentum-space route. I0 is used in scaled form with
    the growth e^{kappa zeta} combined with Phi in the exponent. Raises
    ``OverflowError`` when the integrand is not representable.
    """
    _check_inputs(s, k0, kappa)
    if kappa == 0:
        return float(free_q_zeta(s, k0, quad).value)
    w = s.autocorrelation_width
    peak_exponent = 0.5 * (kappa * w) ** 2
    if peak_exponent > 700.0:
        raise OverflowError("zeta-space integrand overflows for kappa*width=%g; use well_refraction"
                            % (kappa * w))
    z_peak = kappa * w * w
    z_max = z_peak + 12.0 * w

    def f(z):
        lp = s.log_autocorrelation(z)
        return np.exp(lp.real + kappa * z) * bessel_i0_scaled(kappa * z) * np.sin(k0 * z + lp.imag)

    pts = _oscillation_points(k0, 0.0, z_max) or []
    pts = sorted(set(pts) | {z_peak} - {0.0})
    # round-off in the oscillatory sum scales with the size of the integrand
    floor = 1e-14 * math.exp(peak_exponent) * w
    spec = QuadSpec(min(max(quad.abs_tol, floor), 1e-3), quad.rel_tol,
                    max(quad.max_subdivisions, 4 * len(pts) + 64))
    res = integrate_adaptive(f, 0.0, z_max, spec, points=[p for p in pts if 0 < p < z_max],
                             label="zeta_oracle")
    return k0 * float(res.value)


# --------------------------------------------------------------------------
# third exact route for Gaussian packets


def shifted_refraction(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """R = A int_0^inf m(s^2 - u^2) ds for a Gaussian packet.

    A = 2 sqrt(2/pi) v e^{-2v^2}, m(y) = e^{-2y} sinh(4 v sqrt(y))/sqrt(y)
    (continued to y < 0 with sin, m(0) = 4v). Obtained by completing the
    square in the zeta integral; used as an extra oracle.
    """
    u, v = p.sigma * kappa, p.sigma * p.k0
    if not v > 0:
        raise DomainError("k0 must be positive")
    log_a = math.log(2.0 * SQRT_2_OVER_PI * v) - 2.0 * v * v

    def f(s):
        y = s * s - u * u
        out = np.empty_like(s)
        pos = y > 0
        r = np.sqrt(np.abs(y))
        rp = r[pos]
        out[pos] = (np.exp(log_a - 2 * y[pos] + 4 * v * rp) - np.exp(log_a - 2 * y[pos] - 4 * v * rp)) / (2 * rp)
        neg = y < 0
        rn = r[neg]
        out[neg] = np.exp(log_a - 2 * y[neg]) * np.sin(4 * v * rn) / rn
        zero = y == 0
        out[zero] = np.exp(log_a) * 4 * v
        return out

    s_peak = math.sqrt(u * u + v * v)
    s_max = s_peak + 7.0
    # on [0, u] the integrand is bounded by 4 v exp(log_a + 2 u^2); skip it when
    # that bound times u is far below the tolerance
    lo = 0.0
    if u > 0 and log_a + 2 * u * u + math.log(4 * v * u) < math.log(quad.abs_tol) - 30:
        lo = u
    pts = sorted({x for x in (u, s_peak) if lo < x < s_max})
    if lo == 0.0:
        pts = sorted(set(pts) | set(_oscillation_points(4 * v, 0.0, u) or []))
    return float(integrate_adaptive(f, lo, s_max, quad, points=pts, label="shifted").value)


# --------------------------------------------------------------------------
# barrier


def barrier_refraction(s: PacketSpectrum, k0: float, kappa0: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """Barrier index R_B = k0 int_{kappa0}^inf (rho(k) - rho(-k))/sqrt(k^2 - kappa0^2) dk.

    Sign chosen so that kappa0 -> 0 gives +Q. Evaluated with k = kappa0 cosh t.
    """
    _check_inputs(s, k0, kappa0, "kappa0")
    if kappa0 == 0:
        return free_q(s, k0, quad)
    n = _tail_sigmas(s, k0, quad)
    k_max = abs(s.k0) + n * s.momentum_width
    t_max = math.acosh(max(k_max / kappa0, 2.0))
    c = abs(s.k0)
    pts = [math.acosh(x / kappa0) for x in (c - 3 * s.momentum_width, c, c + 3 * s.momentum_width)
           if x > kappa0]
    pts = sorted(p for p in pts if 0 < p < t_max)

    def f(t):
        k = kappa0 * np.cosh(t)
        return s.momentum_density(k) - s.momentum_density(-k)

    return k0 * float(integrate_adaptive(f, 0.0, t_max, quad, points=pts, label="barrier").value)


# --------------------------------------------------------------------------
# deep-well complex-plane form (Gaussian packets)


def deep_well_z(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> complex:
    """The complex factor z of the deep-well form, as a function of u, v."""
    u, v = p.sigma * kappa, p.sigma * p.k0
    if not u > 0:
        raise DomainError("kappa must be positive")
    return complex(kernels.deep_z(u, v, *_kernel_spec(quad))[0])


def deep_well_gamma(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """gamma = int_0^inf exp(-2 sigma^2 (k^2 + 2 k0 k))/sqrt(k^2 + kappa^2) dk."""
    u, v = p.sigma * kappa, p.sigma * p.k0
    if not u > 0:
        raise DomainError("kappa must be positive")
    return float(kernels.deep_gamma(u, v, *_kernel_spec(quad))[0])


def deep_well_mantissa(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """R_kappa / exp(2(u^2 - v^2)) from the z/gamma form."""
    u, v = p.sigma * kappa, p.sigma * p.k0
    z = deep_well_z(p, kappa, quad)
    g = deep_well_gamma(p, kappa, quad)
    return -2.0 * SQRT_2_OVER_PI * v * (z.imag - math.exp(-2.0 * u * u) * g)


def direct_r_kappa_mantissa(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """R_kappa / exp(2(u^2 - v^2)) from the direct finite-range integral."""
    u, v = p.sigma * kappa, p.sigma * p.k0
    if not u > 0:
        raise DomainError("kappa must be positive")
    return float(kernels.r_kappa_mantissa(u, v, *_kernel_spec(quad))[0])


def deep_well_r_kappa(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC,
                      validate: bool = True) -> float:
    """R_kappa = -2 sqrt(2/pi) v [E Im z - e^{-2 v^2} gamma], E = e^{2(u^2 - v^2)}.

    With ``validate`` the result is compared with the direct integral and a
    mismatch beyond 1e-7 (relative to max(1, |mantissa|)) raises
    ``ConsistencyError``; this is what pins the principal branch of the square
    root inside z.
    """
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    u, v = p.sigma * kappa, p.sigma * p.k0
    log_scale = 2.0 * (u * u - v * v)
    mant = deep_well_mantissa(p, kappa, quad)
    if validate:
        direct = direct_r_kappa_mantissa(p, kappa, quad)
        if abs(mant - direct) > 1e-7 * max(1.0, abs(direct)):
            raise ConsistencyError("deep-well form disagrees with the direct integral: %.3g vs %.3g"
                                   % (mant, direct))
    if log_scale > LOG_OVERFLOW:
        raise OverflowError("R_kappa overflows (log scale %.1f); use deep_well_mantissa" % log_scale)
    return mant * math.exp(log_scale)


def deep_well_refraction(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> RefractionResult:
    """Full R with the in-well term from the z/gamma form."""
    _check_inputs(p, p.k0, kappa)
    if kappa == 0:
        return well_refraction(p, p.k0, 0.0, quad)
    u, v = p.sigma * kappa, p.sigma * p.k0
    a_tol, r_tol, n_sub = _kernel_spec(quad)
    rp, ep = kernels.r_plus(u, v, a_tol, r_tol, n_sub)
    rm, em = kernels.r_minus(u, v, a_tol, r_tol, n_sub)
    mant = deep_well_mantissa(p, kappa, quad)
    return _combine(rp, rm, mant, 2.0 * (u * u - v * v), ep + em, p.free_q_closed(),
                    Method.DEEP_WELL_FORM)


# --------------------------------------------------------------------------
# barrier <-> well continuation


@dataclass(frozen=True)
class CancellationReport:
    first_two: complex
    third: complex
    residual: float
    branch_sign: int

    @property
    def passed(self) -> bool:
        return self.residual <= 1e-8 * max(1.0, abs(self.first_two))


def cancellation_identity(s: PacketSpectrum, k0: float, kappa0: float, quad: QuadSpec = DEFAULT_SPEC,
                          branch_sign: int = 1) -> CancellationReport:
    """Check that the continued in-well term cancels the [0, kappa0] part of the rest.

    Continuing kappa -> i kappa0 turns sqrt(k^2 + kappa^2) into
    ``branch_sign * i * sqrt(kappa0^2 - k^2)`` on [0, kappa0]. The in-well term
    becomes k0 int_0^1 W(i kappa0 x)/sqrt(1-x^2) dx with the entire weight
    W(z) = -i (rho(iz) - rho(-iz)). With the correct branch (+1) the two
    pieces sum to zero; ``branch_sign=-1`` is the negative control.
    """
    _check_inputs(s, k0, kappa0, "kappa0")
    if not kappa0 > 0:
        raise DomainError("kappa0 must be positive")

    def diff(k):
        return s.momentum_density(k) - s.momentum_density(-k)

    f_int = integrate_sqrt_singular(diff, kappa0, quad, label="cancellation_f").value
    first_two = k0 * f_int / (branch_sign * 1j)

    def w_cont(x):
        z = 1j * kappa0 * x
        return -1j * (s.momentum_density_analytic(1j * z) - s.momentum_density_analytic(-1j * z))

    third = k0 * integrate_sqrt_singular(w_cont, 1.0, quad, label="cancellation_w").value
    residual = abs(first_two + third)
    return CancellationReport(complex(first_two), complex(third), float(residual), branch_sign)


@dataclass(frozen=True)
class ContinuationReport:
    kappa0: float
    l_path: tuple  # (A, B) along i kappa0 -> 0 -> inf
    polylines: dict = field(default_factory=dict)  # X -> (A, B)
    path_deviation: float = 0.0
    assembled_r: float = 0.0
    direct_r: float = 0.0
    assembly_deviation: float = 0.0
    cancellation: CancellationReport | None = None

    @property
    def max_deviation(self) -> float:
        devs = [self.path_deviation, self.assembly_deviation]
        if self.cancellation is not None:
            devs.append(self.cancellation.residual)
        return max(devs)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= 1e-7


def _sqrt_shifted(z, kappa0):
    """sqrt(z^2 + kappa0^2) as sqrt(z - i kappa0) sqrt(z + i kappa0), principal roots."""
    return np.sqrt(z - 1j * kappa0) * np.sqrt(z + 1j * kappa0)


def _l_path(s, sign, kappa0, k0, quad):
    # l1: i kappa0 -> 0 along the imaginary axis, l2: 0 -> inf on the real axis
    l1 = integrate_sqrt_singular(lambda y: s.momentum_density_analytic(sign * 1j * y), kappa0, quad,
                                 label="l1").value * (-1j)
    l2 = _real_axis_integral(s, sign, kappa0, 0.0, k0, quad, "l2").value
    return complex(l1 + l2)


def _polyline(s, sign, kappa0, x_turn, k0, quad):
    def g(z):
        return s.momentum_density_analytic(sign * z) / _sqrt_shifted(z, kappa0)

    seg = integrate_contour_segment(g, 1j * kappa0, x_turn, quad, singular_start=True,
                                    label="segment").value
    tail = _real_axis_integral(s, sign, kappa0, x_turn, k0, quad, "tail").value
    return complex(seg + tail)


def barrier_well_continuation_check(p: PacketSpectrum, kappa0: float, quad: QuadSpec = DEFAULT_SPEC,
                                    x_points=None, branch_sign: int = 1,
                                    raise_on_failure: bool = True) -> ContinuationReport:
    """Contour checks linking the barrier and well formulas.

    Integrates rho(+-k)/sqrt(k^2 + kappa0^2) from i kappa0 to infinity along
    the L-shaped path and along polylines through real turning points X,
    checks path independence, and checks that k0 (A - B) reproduces the
    momentum-space R at kappa = kappa0. Also runs ``cancellation_identity``.
    """
    k0 = p.k0
    _check_inputs(p, k0, kappa0, "kappa0")
    if kappa0 == 0:
        q_m = float(free_q_momentum(p, k0, quad).value)
        q = free_q(p, k0, quad)
        dev = abs(q_m - q)
        report = ContinuationReport(0.0, (complex(q_m / k0), 0j), {}, 0.0, q_m, q, dev, None)
    else:
        if x_points is None:
            x_points = (0.5 * kappa0, kappa0, 2.0 * kappa0, max(k0, 0.1 * kappa0))
        a_l = _l_path(p, 1, kappa0, k0, quad)
        b_l = _l_path(p, -1, kappa0, k0, quad)
        polys = {}
        dev = 0.0
        for x in x_points:
            a_x = _polyline(p, 1, kappa0, float(x), k0, quad)
            b_x = _polyline(p, -1, kappa0, float(x), k0, quad)
            polys[float(x)] = (a_x, b_x)
            dev = max(dev, abs(a_x - a_l), abs(b_x - b_l))
        assembled = k0 * (a_l - b_l)
        direct = well_refraction(p, k0, kappa0, quad).total
        assembly_dev = max(abs(assembled.real - direct), abs(assembled.imag))
        canc = cancellation_identity(p, k0, kappa0, quad, branch_sign)
        report = ContinuationReport(kappa0, (a_l, b_l), polys, dev, float(assembled.real), direct,
                                    assembly_dev, canc)
    if raise_on_failure and not report.passed:
        raise ConsistencyError("continuation check failed (max deviation %.3g)" % report.max_deviation,
                               report)
    return report
