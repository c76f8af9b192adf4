"""Traversal times assembled from the refraction indices.

tau_W = (L/v0) R is the quantum traversal time across the well, tau_F =
(L/v0) Q the free-space reference over the same length and
delta_tau = tau_F - tau_W: positive means the packet is advanced by the well.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .domain import ATOMIC_UNITS, DomainError, PhysicalConstants, WellGeometry, parse_config
from .packet import GaussianPacket, PacketSpectrum
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_gaussian_tail, integrate_sqrt_singular
from .refraction import RefractionResult, barrier_refraction, well_refraction

_EPS = np.finfo(float).eps


class Classification(enum.Enum):
    ADVANCED = "advanced"
    DELAYED = "delayed"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class TraversalReport:
    tau_well: float
    tau_free: float
    delta_tau: float
    refraction: RefractionResult
    classical_tau: float
    classification: Classification
    tolerance: float = 0.0

    def __post_init__(self):
        scale = max(1.0, abs(self.tau_free), abs(self.tau_well))
        if abs(self.delta_tau - (self.tau_free - self.tau_well)) > 1e-12 * scale:
            raise ValueError("delta_tau must equal tau_free - tau_well")

    def as_dict(self) -> dict:
        out = {
            "tau_well": self.tau_well,
            "tau_free": self.tau_free,
            "delta_tau": self.delta_tau,
            "classical_tau": self.classical_tau,
            "classification": self.classification.value,
            "tolerance": self.tolerance,
        }
        out.update({"refraction": self.refraction.as_dict()})
        return out


def classify(delta_tau: float, tol: float) -> Classification:
    if delta_tau > tol:
        return Classification.ADVANCED
    if delta_tau < -tol:
        return Classification.DELAYED
    return Classification.NEUTRAL


def traversal_times(s: PacketSpectrum, k0: float, kappa: float, length: float,
                    c: PhysicalConstants = ATOMIC_UNITS, quad: QuadSpec = DEFAULT_SPEC) -> TraversalReport:
    """tau_W, tau_F and their difference for a well of width ``length``."""
    if not length > 0:
        raise DomainError("well width L must be positive")
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    r = well_refraction(s, k0, kappa, quad)
    t_unit = c.mass * length / (c.hbar * k0)  # L / v0
    tau_w = t_unit * r.total
    tau_f = t_unit * r.q_free
    delta = tau_f - tau_w
    # dead band: propagated quadrature error plus the rounding of the difference
    tol = t_unit * (r.error_estimate + 4 * _EPS * max(abs(r.total), abs(r.q_free)))
    classical = c.mass * length / (c.hbar * math.hypot(k0, kappa))
    return TraversalReport(tau_w, tau_f, delta, r, classical, classify(delta, tol), tol)


class VelocityFunctionals(NamedTuple):
    v_top: float
    v_in: float
    tau_top: float
    tau_in: float


def velocity_functionals(k: float, kappa: float, length: float,
                         c: PhysicalConstants = ATOMIC_UNITS) -> VelocityFunctionals:
    """Speeds and crossing times on top of (k^2 + kappa^2) and inside (kappa^2 - k^2) the well."""
    if not 0 <= k < kappa:
        raise DomainError("velocity_functionals requires 0 <= k < kappa (v_in vanishes at k = kappa)")
    v_top = c.hbar * math.hypot(k, kappa) / c.mass
    v_in = c.hbar * math.sqrt(kappa * kappa - k * k) / c.mass
    return VelocityFunctionals(v_top, v_in, length / v_top, length / v_in)


def tau_top(k, kappa: float, length: float, c: PhysicalConstants = ATOMIC_UNITS):
    """L / v_top(k), vectorised, defined for every real k."""
    k = np.asarray(k, dtype=float)
    return length * c.mass / (c.hbar * np.hypot(k, kappa))


def weighted_sum_traversal(s: PacketSpectrum, kappa: float, length: float,
                           c: PhysicalConstants = ATOMIC_UNITS, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """tau_W as a weighted sum of crossing times.

    tau_W = int_0^inf tau_top (rho(k) - rho(-k)) dk + int_0^kappa tau_in(k) W(k) dk

    Assembled independently of ``well_refraction``: the real-axis part goes
    through the Gaussian-tail integrator and the in-well part carries
    tau_in(k) = L mu/(hbar sqrt(kappa^2 - k^2)) as the singular weight.
    """
    if not length > 0:
        raise DomainError("well width L must be positive")
    if not kappa >= 0:
        raise DomainError("kappa must be non-negative")
    unit = length * c.mass / c.hbar

    def top(k):
        return tau_top(k, kappa, length, c) * (s.momentum_density(k) - s.momentum_density(-k))

    sm = s.momentum_width
    amp = 2 * s.density_peak * unit / max(kappa, sm)
    # 1/sqrt(k^2 + kappa^2) turns over at k ~ kappa, which can be far inside the first panel
    # (floored at 1e-100: below that the weight adds nothing and 1/k overflows)
    corner = [max(kappa, 1e-100) * 10.0**j for j in range(8)] if kappa > 0 else []
    outer = integrate_gaussian_tail(top, abs(s.k0), sm, quad, amplitude=amp, label="tau_top",
                                    points=corner)
    total = float(outer.value)
    if kappa > 0:
        grid = np.linspace(0.0, kappa, 257)
        env, _ = s.log_imag_axis_weight(grid)
        log_scale = float(np.max(env))
        if log_scale > 709:
            raise OverflowError("in-well weight overflows (log scale %.1f)" % log_scale)

        def inner(k):
            e, fac = s.log_imag_axis_weight(k)
            return np.exp(e - log_scale) * fac

        pts = list(np.linspace(0.0, 0.5 * math.pi, 33)[1:-1])
        res = integrate_sqrt_singular(inner, kappa, quad, points=pts, label="tau_in")
        total += unit * float(res.value) * math.exp(log_scale)
    return total


def barrier_traversal_time(s: PacketSpectrum, k0: float, kappa0: float, length: float,
                           c: PhysicalConstants = ATOMIC_UNITS, quad: QuadSpec = DEFAULT_SPEC) -> float:
    """(L/v0) R_B for a barrier of height (hbar kappa0)^2/(2 mu)."""
    if not length > 0:
        raise DomainError("barrier width L must be positive")
    return c.mass * length / (c.hbar * k0) * barrier_refraction(s, k0, kappa0, quad)


@dataclass(frozen=True)
class TraversalProblem:
    """A packet, a well and a unit system, validated together.

    Construction fails with ``SupportError`` if the packet overlaps the well.
    """

    packet: GaussianPacket
    well: WellGeometry
    constants: PhysicalConstants = ATOMIC_UNITS

    def __post_init__(self):
        self.packet.check_support(self.well.edge_far)
        if not self.packet.k0 > 0:
            raise DomainError("k0 must be positive")

    @property
    def kappa(self) -> float:
        return self.well.kappa(self.constants)

    @classmethod
    def from_config(cls, block: dict) -> "TraversalProblem":
        cfg = parse_config(block)
        c = PhysicalConstants(cfg["mass"], cfg["hbar"])
        return cls(GaussianPacket(cfg["q0"], cfg["sigma"], cfg["k0"]),
                   WellGeometry(cfg["V0"], cfg["a"], cfg["b"]), c)

    def report(self, quad: QuadSpec = DEFAULT_SPEC) -> TraversalReport:
        return traversal_times(self.packet, self.packet.k0, self.kappa, self.well.width,
                               self.constants, quad)
