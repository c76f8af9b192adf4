"""Closed-form expansions of the refraction index.

* ``high_energy_r``: double series in hbar^2/(2 mu E0) and V0/E0.
* ``wide_packet_r``: Taylor expansion of 1/sqrt(k^2 + kappa^2) about k0,
  averaged over the Gaussian momentum density.
* ``narrow_shallow_r``: Q plus the first correction in (sigma kappa)^2.
* ``deep_well_dominant_r``: the exponentially dominant part of R_kappa.

Each returns an ``ExpansionResult`` whose truncation estimate is the size of
the first omitted term.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from .domain import ATOMIC_UNITS, DomainError, PhysicalConstants
from .packet import SQRT_2_OVER_PI, GaussianPacket, PacketSpectrum
from .quadrature import DEFAULT_SPEC, QuadSpec
from .refraction import LOG_OVERFLOW, deep_well_gamma, deep_well_z
from .specfun import struve_h0, struve_l0, struve_l1


class Regime(enum.Enum):
    HIGH_ENERGY = "high-energy"
    WIDE_PACKET = "wide-packet"
    NARROW_SHALLOW = "narrow-shallow"
    DEEP_WELL = "deep-well"


class RegimeWarning(UserWarning):
    """Parameters lie outside the regime an expansion is meant for."""


class DivergentRegimeError(DomainError):
    """The requested series does not converge for these parameters."""


@dataclass(frozen=True)
class ExpansionResult:
    value: float
    terms_used: int
    truncation_estimate: float
    regime: Regime
    terms: tuple = ()
    optimal_index: int | None = None


# --------------------------------------------------------------------------


def high_energy_r(s: PacketSpectrum, energy: float, depth: float, j_max: int, l_max: int,
                  c: PhysicalConstants = ATOMIC_UNITS) -> ExpansionResult:
    """R ~ sum_{j,l} (-1)^{j+l} 4^{-l} (hbar^2/(2 mu E0))^j C(2j+2l, 2l) C(2l, l) (V0/E0)^l Phi^{(2j)}(0)."""
    if not energy > 0:
        raise DomainError("E0 must be positive")
    if depth < 0:
        raise DomainError("V0 must be non-negative")
    if j_max < 0 or l_max < 0:
        raise DomainError("j_max and l_max must be non-negative")
    x = depth / energy
    if x >= 1.0:
        raise DivergentRegimeError("V0/E0 = %g >= 1: the series in V0/E0 diverges" % x)
    h = c.hbar**2 / (2.0 * c.mass * energy)

    def term(j, l):
        return ((-1) ** (j + l) / 4.0**l * h**j * math.comb(2 * j + 2 * l, 2 * l)
                * math.comb(2 * l, l) * x**l * s.autocorrelation_even_derivative(j))

    grid = np.array([[term(j, l) for l in range(l_max + 1)] for j in range(j_max + 1)])
    value = math.fsum(grid.ravel())
    next_j = sum(abs(term(j_max + 1, l)) for l in range(l_max + 1))
    next_l = sum(abs(term(j, l_max + 1)) for j in range(j_max + 1))
    return ExpansionResult(value, grid.size, max(next_j, next_l), Regime.HIGH_ENERGY,
                           tuple(grid.sum(axis=1)))


# --------------------------------------------------------------------------


def _wide_terms(p: GaussianPacket, kappa: float, n_hi: int):
    k0 = p.k0
    r = math.hypot(k0, kappa)
    x = k0 / r
    out = []
    for n in range(1, n_hi + 1):
        # chi_n = d^{2n}/dk^{2n} (k^2+kappa^2)^{-1/2} at k0 = (2n)! P_{2n}(k0/r) / r^{2n+1};
        # the Gaussian moment <(k-k0)^{2n}> = (2n-1)!! / (2 sigma)^{2n} cancels the (2n)!
        p2n = legendre.legval(x, [0.0] * (2 * n) + [1.0])
        dfact = math.prod(range(2 * n - 1, 0, -2))
        out.append(k0 * dfact * p2n / ((2.0 * p.sigma) ** (2 * n) * r ** (2 * n + 1)))
    return out


def wide_packet_r(p: GaussianPacket, kappa: float, n_max: int) -> ExpansionResult:
    """Moment expansion k0 <1/sqrt(k^2+kappa^2)> about k = k0.

    R ~ k0/sqrt(k0^2+kappa^2) + k0 sum_n (2n-1)!!/((2 sigma)^{2n} (2n)!) chi_n.
    The series is asymptotic; ``optimal_index`` is the index of the smallest
    term among n = 1..n_max+1.
    """
    if not 0 <= n_max <= 6:
        raise DomainError("n_max must lie in [0, 6]")
    if not p.k0 > 0:
        raise DomainError("k0 must be positive")
    if p.sigma * p.k0 < 3.0:
        warnings.warn("wide_packet_r: sigma*k0 = %g is not large" % (p.sigma * p.k0), RegimeWarning)
    lead = p.k0 / math.hypot(p.k0, kappa)
    terms = _wide_terms(p, kappa, n_max + 1)
    value = lead + float(sum(terms[:n_max]))
    mags = [abs(t) for t in terms]
    opt = int(np.argmin(mags)) + 1
    return ExpansionResult(value, n_max + 1, mags[n_max], Regime.WIDE_PACKET,
                           (lead, *terms[:n_max]), opt)


# --------------------------------------------------------------------------


def _log_a(v):
    return math.log(2.0 * SQRT_2_OVER_PI * v) - 2.0 * v * v


def scaled_m_derivative(n: int, v: float) -> float:
    """A * M^{(n)}(0) with M(w) = int_0^inf m(s^2 + w) ds.

    m(y) = e^{-2y} sinh(4 v sqrt y)/sqrt y = sum_j b^{2j+1} y^j e^{-2y}/(2j+1)!,
    b = 4v, integrated term by term with int_0^inf s^{2m} e^{-2 s^2} ds =
    Gamma(m + 1/2)/2^{m + 3/2}. A = 2 sqrt(2/pi) v e^{-2 v^2} is folded into
    the log-scaled terms so nothing overflows. n = 0 gives Q.
    """
    b = 4.0 * v
    log_a = _log_a(v)
    j_top = int(4 * v * v + 12 * v + 60)
    total = 0.0
    for j in range(j_top):
        log_c = (2 * j + 1) * math.log(b) - math.lgamma(2 * j + 2) if b > 0 else -math.inf
        acc = 0.0
        for i in range(0, min(n, j) + 1):
            m = j - i
            log_g = math.lgamma(m + 0.5) - (m + 1.5) * math.log(2.0)
            log_fall = math.lgamma(j + 1) - math.lgamma(m + 1)
            acc += math.comb(n, i) * (-2.0) ** (n - i) * math.exp(log_a + log_c + log_fall + log_g)
        total += acc
    return total


def narrow_shallow_r(p: GaussianPacket, kappa: float) -> ExpansionResult:
    """R ~ Q + Omega with Omega = u^2 [4 v^2 (1 - Q) + Q], u = sigma kappa, v = sigma k0.

    Omega is the (sigma kappa)^2 term of R = A M(-u^2); the truncation estimate
    is the next term A u^4 |M''(0)|/2.
    """
    if not p.k0 > 0:
        raise DomainError("k0 must be positive")
    if kappa < 0:
        raise DomainError("kappa must be non-negative")
    u, v = p.sigma * kappa, p.sigma * p.k0
    if u > 0.5:
        warnings.warn("narrow_shallow_r: sigma*kappa = %g is not small" % u, RegimeWarning)
    q = p.free_q_closed()
    omega = u * u * (4.0 * v * v * (1.0 - q) + q)
    est = 0.5 * u**4 * abs(scaled_m_derivative(2, v))
    return ExpansionResult(q + omega, 2, est, Regime.NARROW_SHALLOW, (q, omega))


def printed_struve_omega(p: GaussianPacket, kappa: float) -> float:
    """The Struve-function correction in the form it is usually quoted,

        sqrt(2 pi) k0 sigma e^{-2 k0^2 sigma^2} [k0 L0(a) - k0 H0(a) + kappa L1(a)],
        a = 4 k0 kappa sigma^2,

    kept for comparison only. It is not dimensionless and does not reproduce
    the quadrature values; ``narrow_shallow_r`` uses the derived correction.
    """
    v = p.sigma * p.k0
    a = 4.0 * p.k0 * kappa * p.sigma**2
    bracket = p.k0 * float(struve_l0(a)) - p.k0 * float(struve_h0(a)) + kappa * float(struve_l1(a))
    return math.sqrt(2 * math.pi) * v * math.exp(-2 * v * v) * bracket


# --------------------------------------------------------------------------


def deep_well_dominant_r(p: GaussianPacket, kappa: float, quad: QuadSpec = DEFAULT_SPEC) -> ExpansionResult:
    """R_kappa ~ -2 sqrt(2/pi) v E Im z with E = e^{2(u^2 - v^2)}.

    The truncation estimate is the dropped term 2 sqrt(2/pi) v e^{-2 v^2} gamma.
    """
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    u, v = p.sigma * kappa, p.sigma * p.k0
    if kappa < 2.0 * p.k0:
        warnings.warn("deep_well_dominant_r: kappa/k0 = %g is not large" % (kappa / p.k0), RegimeWarning)
    log_scale = 2.0 * (u * u - v * v)
    if log_scale > LOG_OVERFLOW:
        raise OverflowError("dominant term overflows (log scale %.1f)" % log_scale)
    z = deep_well_z(p, kappa, quad)
    g = deep_well_gamma(p, kappa, quad)
    value = -2.0 * SQRT_2_OVER_PI * v * math.exp(log_scale) * z.imag
    dropped = 2.0 * SQRT_2_OVER_PI * v * math.exp(-2.0 * v * v) * g
    return ExpansionResult(value, 1, dropped, Regime.DEEP_WELL, (value,))
