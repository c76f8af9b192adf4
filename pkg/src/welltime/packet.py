"""Incident wave packets described through their momentum-space functionals.

The time formulas only ever need three functionals of the packet: the
momentum density |psi(k)|^2, the imaginary-axis weight
Im[2 psi(ik) conj(psi(-ik))] and the envelope autocorrelation Phi(zeta).
``PacketSpectrum`` is the interface; ``GaussianPacket`` implements it.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from .domain import DomainError
from .specfun import dawson

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

SUPPORT_CUTOFF = 1e-8


class SupportError(ValueError):
    """The packet overlaps the well region more than the declared cutoff."""


class PacketSpectrum(abc.ABC):
    """Momentum-space functionals of an incident packet.

    Implementations must be entire in k (no poles); ``is_entire`` declares
    this and the refraction routines reject spectra that do not.
    """

    is_entire: bool = True

    @property
    @abc.abstractmethod
    def k0(self) -> float:
        """Mean wavenumber."""

    @abc.abstractmethod
    def momentum_density(self, k):
        """|psi(k)|^2 on the real axis."""

    @abc.abstractmethod
    def log_momentum_density(self, k):
        """log |psi(k)|^2."""

    @abc.abstractmethod
    def momentum_density_analytic(self, z):
        """Entire continuation of |psi(k)|^2 off the real axis."""

    @abc.abstractmethod
    def imag_axis_weight(self, k):
        """Im[2 psi(ik) conj(psi(-ik))] for real k."""

    @abc.abstractmethod
    def log_imag_axis_weight(self, k):
        """``(log_envelope, factor)`` with weight = exp(log_envelope) * factor."""

    @abc.abstractmethod
    def autocorrelation(self, zeta):
        """Envelope autocorrelation Phi(zeta), Phi(0) = 1."""

    @abc.abstractmethod
    def log_autocorrelation(self, zeta):
        """log Phi(zeta) as a complex number."""

    @abc.abstractmethod
    def autocorrelation_even_derivative(self, j: int) -> float:
        """The 2j-th derivative of Phi at zero."""

    # scales used to truncate semi-infinite integrals
    @property
    @abc.abstractmethod
    def momentum_width(self) -> float:
        """Standard deviation of the momentum density."""

    @property
    @abc.abstractmethod
    def autocorrelation_width(self) -> float:
        """Scale s with |Phi(zeta)| <= exp(-zeta^2 / (2 s^2))."""

    @property
    def density_peak(self) -> float:
        return float(self.momentum_density(self.k0))


@dataclass(frozen=True, init=False, repr=False)
class GaussianPacket(PacketSpectrum):
    """psi(q) ~ exp(-(q - q0)^2 / (4 sigma^2) + i k0 q)."""

    q0: float
    sigma: float
    k0_: float

    def __init__(self, q0: float, sigma: float, k0: float):
        object.__setattr__(self, "q0", float(q0))
        object.__setattr__(self, "sigma", float(sigma))
        object.__setattr__(self, "k0_", float(k0))
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError("sigma must be positive and finite")
        if not (math.isfinite(self.q0) and math.isfinite(self.k0_)):
            raise DomainError("q0 and k0 must be finite")

    def __repr__(self):
        return "GaussianPacket(q0=%r, sigma=%r, k0=%r)" % (self.q0, self.sigma, self.k0_)

    @property
    def k0(self) -> float:
        return self.k0_

    @property
    def u_scale(self) -> float:
        """sigma * k0, the dimensionless energy parameter."""
        return self.sigma * self.k0_

    # --- amplitude --------------------------------------------------------

    def log_psi_tilde(self, z):
        """log psi(z), entire, including the e^{-i z q0} position phase."""
        z = np.asarray(z, dtype=complex)
        s2 = self.sigma**2
        norm = 0.25 * math.log(2.0 * s2 / math.pi)
        return norm - s2 * (z - self.k0_) ** 2 - 1j * z * self.q0

    def psi_tilde(self, z):
        return np.exp(self.log_psi_tilde(z))

    def imag_axis_product(self, k):
        """psi(ik) conj(psi(-ik)) assembled from the amplitude, phases included."""
        k = np.asarray(k, dtype=float)
        logp = self.log_psi_tilde(1j * k) + np.conj(self.log_psi_tilde(-1j * k))
        return np.exp(logp)

    # --- functionals ------------------------------------------------------

    def momentum_density(self, k):
        k = np.asarray(k, dtype=float)
        return SQRT_2_OVER_PI * self.sigma * np.exp(-2.0 * self.sigma**2 * (k - self.k0_) ** 2)

    def log_momentum_density(self, k):
        k = np.asarray(k, dtype=float)
        return math.log(SQRT_2_OVER_PI * self.sigma) - 2.0 * self.sigma**2 * (k - self.k0_) ** 2

    def momentum_density_analytic(self, z):
        z = np.asarray(z, dtype=complex)
        return SQRT_2_OVER_PI * self.sigma * np.exp(-2.0 * self.sigma**2 * (z - self.k0_) ** 2)

    def imag_axis_weight(self, k):
        env, fac = self.log_imag_axis_weight(k)
        return np.exp(env) * fac

    def log_imag_axis_weight(self, k):
        k = np.asarray(k, dtype=float)
        s2 = self.sigma**2
        env = math.log(2.0 * SQRT_2_OVER_PI * self.sigma) + 2.0 * s2 * (k * k - self.k0_**2)
        return env, np.sin(4.0 * s2 * self.k0_ * k)

    def autocorrelation(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return np.exp(-zeta * zeta / (8.0 * self.sigma**2)) + 0j

    def log_autocorrelation(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return -zeta * zeta / (8.0 * self.sigma**2) + 0j

    def autocorrelation_even_derivative(self, j: int) -> float:
        if j < 0:
            raise ValueError("j must be non-negative")
        double_fact = math.prod(range(2 * j - 1, 0, -2)) if j > 0 else 1
        return (-1) ** j * double_fact / (4.0 * self.sigma**2) ** j

    @property
    def momentum_width(self) -> float:
        return 0.5 / self.sigma

    @property
    def autocorrelation_width(self) -> float:
        return 2.0 * self.sigma

    @property
    def density_peak(self) -> float:
        return SQRT_2_OVER_PI * self.sigma

    # --- closed forms and checks ------------------------------------------

    def free_q_closed(self) -> float:
        """Free correction factor 2 sqrt(2) v F(sqrt(2) v), v = sigma k0.

        Equivalent to sqrt(2 pi) v exp(-2 v^2) erfi(sqrt(2) v) without the
        overflow of the unscaled form.
        """
        v = self.u_scale
        return 2.0 * math.sqrt(2.0) * v * float(dawson(math.sqrt(2.0) * v))

    def mass_beyond(self, position: float) -> float:
        """Probability that the position density lies to the right of ``position``."""
        return 0.5 * math.erfc((position - self.q0) / (math.sqrt(2.0) * self.sigma))

    def check_support(self, edge_far: float, cutoff: float = SUPPORT_CUTOFF) -> None:
        """Raise ``SupportError`` unless the packet sits left of q = -edge_far."""
        if not self.q0 < -edge_far:
            raise SupportError("packet centre q0=%g must lie left of the well edge %g"
                               % (self.q0, -edge_far))
        leak = self.mass_beyond(-edge_far)
        if leak > cutoff:
            raise SupportError("packet density beyond the well edge is %.3g > %.1g"
                               % (leak, cutoff))


def gaussian_momentum_density(p: GaussianPacket, k):
    return p.momentum_density(k)


def gaussian_imag_axis_weight(p: GaussianPacket, k):
    return p.imag_axis_weight(k)


def gaussian_autocorrelation(p: GaussianPacket, zeta):
    return p.autocorrelation(zeta)
