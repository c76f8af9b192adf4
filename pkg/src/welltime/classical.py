"""Time-kernel factors and their classical arrival-time limits.

The kernel of the arrival-time operator for the rectangular well is piecewise
in the centroid coordinate eta. Expanding the Bessel factor in powers of zeta
and inverting each power term by term gives a series whose sum is the
classical arrival time; ``classical_limit_series`` implements that route so it
can be compared against the closed forms in ``classical_toa``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .domain import ATOMIC_UNITS, DomainError, PhysicalConstants, WellGeometry
from .specfun import bessel_i0_scaled, bessel_j0


class KernelRegion(enum.Enum):
    REGION1 = 1  # -b < eta <= 0, between the well and the arrival point
    REGION2 = 2  # -a < eta <= -b, inside the well
    REGION3 = 3  # eta <= -a, left of the well


class SeriesAccuracyWarning(UserWarning):
    """Term-by-term series tail did not decrease monotonically."""


def region_of(eta: float, well: WellGeometry) -> KernelRegion:
    if eta > 0:
        raise DomainError("eta must be <= 0 (arrival point at the origin)")
    if eta > -well.edge_near:
        return KernelRegion.REGION1
    if eta > -well.edge_far:
        return KernelRegion.REGION2
    return KernelRegion.REGION3


def kernel_value(region: KernelRegion, eta: float, zeta, kappa: float, well: WellGeometry):
    """Kernel factor T_n(eta, zeta) for the given region.

    ``zeta`` may be an array. The Region-3 Bessel factor is formed from the
    scaled I0 so arguments up to the double-precision exponent limit work.
    """
    if region_of(eta, well) is not region:
        raise DomainError("eta=%g is not in %s" % (eta, region.name))
    z = np.abs(np.asarray(zeta, dtype=float)) * kappa
    if region is KernelRegion.REGION1:
        out = np.full_like(z, 0.5 * eta)
    elif region is KernelRegion.REGION2:
        out = 0.5 * eta - 0.5 * well.edge_near * (bessel_j0(z) - 1.0)
    else:
        if np.any(z > 709.0):
            raise OverflowError("kernel value overflows for kappa*|zeta| > 709")
        i0 = np.asarray(bessel_i0_scaled(z)) * np.exp(z)
        out = 0.5 * eta - 0.5 * well.width * (i0 - 1.0)
    return float(out) if np.ndim(out) == 0 else out


def classical_toa(region: KernelRegion, q0: float, p0: float, well: WellGeometry,
                  c: PhysicalConstants = ATOMIC_UNITS) -> float:
    """Classical arrival time at the origin for a start point in ``region``."""
    if not p0 > 0:
        raise DomainError("classical_toa requires p0 > 0")
    mu = c.mass
    if region is KernelRegion.REGION1:
        return -mu * q0 / p0
    if region is KernelRegion.REGION2:
        rad = p0 * p0 - 2.0 * mu * well.depth
        if not rad > 0:
            raise DomainError("Region-2 time requires 2*mu*V0/p0^2 < 1")
        return -mu * (q0 + well.edge_near) / p0 + mu * well.edge_near / math.sqrt(rad)
    return -mu * (q0 + well.width) / p0 + mu * well.width / math.sqrt(p0 * p0 + 2.0 * mu * well.depth)


def classical_well_time(p0: float, well: WellGeometry, c: PhysicalConstants = ATOMIC_UNITS) -> float:
    """Classical traversal time mu L / sqrt(p0^2 + 2 mu V0)."""
    if not p0 > 0:
        raise DomainError("classical_well_time requires p0 > 0")
    return c.mass * well.width / math.sqrt(p0 * p0 + 2.0 * c.mass * well.depth)


@dataclass(frozen=True)
class ClassicalSeriesResult:
    value: float
    n_terms: int
    last_term: float
    tail_monotone: bool

    def __float__(self):
        return self.value


def _log_kernel_coefficient(region: KernelRegion, n: int, kappa: float, well: WellGeometry):
    """(log|c_n|, sign) for the zeta^{2n} Taylor coefficient of the Bessel part."""
    length = well.width if region is KernelRegion.REGION3 else well.edge_near
    # I0 / J0 coefficients: (kappa/2)^{2n} / (n!)^2, J0 alternates
    logc = math.log(0.5 * length) + 2 * n * math.log(0.5 * kappa) - 2.0 * math.lgamma(n + 1)
    sign = -1.0
    if region is KernelRegion.REGION2 and n % 2 == 1:
        sign = 1.0
    return logc, sign


def _log_inverse_moment(m: int, x: float):
    """(log|.|, phase) of int nu^{m-1} sgn(nu) e^{-i x nu} dnu = 2 (m-1)! / (i^m x^m)."""
    logmag = math.log(2.0) + math.lgamma(m) - m * math.log(x)
    phase = (-1j) ** (m % 4)
    return logmag, phase


def classical_limit_series(region: KernelRegion, q0: float, p0: float, well: WellGeometry,
                           c: PhysicalConstants = ATOMIC_UNITS, n_terms: int = 40) -> ClassicalSeriesResult:
    """Partial sum of the term-by-term classical limit of the region kernel.

    Term 0 is the free part -mu q0/p0; term n >= 1 is the inverse transform of
    the zeta^{2n} coefficient of the kernel's Bessel part.
    """
    if not p0 > 0:
        raise DomainError("classical_limit_series requires p0 > 0")
    mu, hbar = c.mass, c.hbar
    base = -mu * q0 / p0
    if region is KernelRegion.REGION1:
        if n_terms < 1:
            raise DomainError("n_terms must be >= 1")
        return ClassicalSeriesResult(base, n_terms, 0.0, True)
    if n_terms < 4:
        raise DomainError("n_terms must be >= 4")
    y = 2.0 * mu * well.depth / (p0 * p0)
    if not y < 1.0:
        raise DomainError("series requires 2*mu*V0/p0^2 < 1 (got %g)" % y)
    kap = math.sqrt(2.0 * mu * well.depth) / hbar
    x = p0 / hbar
    terms = []
    for n in range(1, n_terms):
        logc, sign = _log_kernel_coefficient(region, n, kap, well)
        logw, phase = _log_inverse_moment(2 * n + 1, x)
        # t_n = -(mu/hbar) c_n Re[i W]
        terms.append(-(mu / hbar) * sign * math.exp(logc + logw) * (1j * phase).real)
    terms = np.array(terms)
    mags = np.abs(terms)
    tail = mags[-min(4, mags.size):]
    monotone = bool(np.all(np.diff(tail) <= 0))
    if not monotone:
        warnings.warn("classical_limit_series: tail terms are not decreasing", SeriesAccuracyWarning)
    # sum smallest first to limit round-off
    value = base + float(np.sum(terms[::-1]))
    return ClassicalSeriesResult(value, n_terms, float(terms[-1]), monotone)
