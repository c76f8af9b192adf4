"""Physical parameter types and unit conventions.

Everything defaults to atomic units (mass = hbar = 1). The well occupies
``-a < q < -b`` with depth ``V0``; its width ``L = a - b`` is derived.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path


class DomainError(ValueError):
    """An input lies outside the domain of a formula."""


class ConfigError(ValueError):
    """A configuration file or block could not be interpreted."""


@dataclass(frozen=True)
class PhysicalConstants:
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError("mass must be positive and finite")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError("hbar must be positive and finite")


ATOMIC_UNITS = PhysicalConstants()


@dataclass(frozen=True)
class WellGeometry:
    """Rectangular well of depth ``depth`` between ``-edge_far`` and ``-edge_near``."""

    depth: float
    edge_far: float
    edge_near: float

    def __post_init__(self):
        if not self.depth > 0:
            raise DomainError("well depth must be positive")
        if not self.edge_near > 0:
            raise DomainError("edge_near (b) must be positive")
        if not self.edge_far > self.edge_near:
            raise DomainError("edge_far (a) must exceed edge_near (b)")

    @property
    def width(self) -> float:
        return self.edge_far - self.edge_near

    def kappa(self, c: PhysicalConstants = ATOMIC_UNITS) -> float:
        return kappa(self, c)

    @classmethod
    def from_kappa(cls, kappa_value: float, edge_far: float, edge_near: float,
                   c: PhysicalConstants = ATOMIC_UNITS) -> "WellGeometry":
        """Build the well whose wavenumber is ``kappa_value``."""
        depth = (kappa_value * c.hbar) ** 2 / (2.0 * c.mass)
        return cls(depth, edge_far, edge_near)


@dataclass(frozen=True)
class KinematicState:
    """Initial packet centre ``q0`` and mean wavenumber ``k0``."""

    q0: float
    k0: float
    constants: PhysicalConstants = field(default=ATOMIC_UNITS)

    def __post_init__(self):
        if not (math.isfinite(self.q0) and math.isfinite(self.k0)):
            raise DomainError("q0 and k0 must be finite")

    @property
    def p0(self) -> float:
        return self.constants.hbar * self.k0

    @property
    def energy(self) -> float:
        return self.p0**2 / (2.0 * self.constants.mass)

    @property
    def velocity(self) -> float:
        return self.p0 / self.constants.mass


def kappa(well: WellGeometry, c: PhysicalConstants = ATOMIC_UNITS) -> float:
    """In-well wavenumber sqrt(2 mu V0)/hbar."""
    return math.sqrt(2.0 * c.mass * well.depth) / c.hbar


def kappa_from_depth(depth: float, c: PhysicalConstants = ATOMIC_UNITS) -> float:
    if depth < 0:
        raise DomainError("depth must be non-negative")
    return math.sqrt(2.0 * c.mass * depth) / c.hbar


def classical_refraction(k0: float, kappa: float) -> float:
    """Classical index k0/sqrt(k0^2 + kappa^2) = sqrt(E0/(E0+V0))."""
    if not k0 > 0:
        raise DomainError("classical_refraction requires k0 > 0")
    return k0 / math.hypot(k0, kappa)


# --------------------------------------------------------------------------
# JSON configuration

CONFIG_DEFAULTS = {
    "mass": 1.0,
    "hbar": 1.0,
    "V0": 0.5,
    "a": 3.0,
    "b": 1.0,
    "k0": 5.0,
    "sigma": 1.0,
    "q0": -30.0,
}


def parse_config(block) -> dict:
    """Validate a config mapping and fill in defaults. Unknown keys are errors."""
    if not isinstance(block, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(block) - set(CONFIG_DEFAULTS))
    if unknown:
        raise ConfigError("unknown config key(s): %s" % ", ".join(unknown))
    out = dict(CONFIG_DEFAULTS)
    for key, val in block.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError("config key %r must be a number" % key)
        if not math.isfinite(val):
            raise ConfigError("config key %r must be finite" % key)
        out[key] = float(val)
    return out


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    try:
        block = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed JSON in %s: %s" % (path, exc)) from exc
    return parse_config(block)
