"""Physical units <-> nondimensional eigenvalues.

With E_a = hbar^2 / (2 m a^2) and sigma^(N+2) = mu / E_a, the scaled problem
-psi'' + |xi*|^N psi = lambda psi has eigenvalues related to the physical
energies by

    E = lambda * sigma^2 * E_a = lambda * E_a^(1 - 1/beta) * mu^(1/beta),

where beta = (N + 2) / 2. The two exponents sum to one, so E splits into a
kinetic-scale and a potential-scale factor.

Units are the caller's: E_a and mu must come out in the same energy unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import InvalidArgumentError


def _check_N(N: float) -> None:
    if not N >= 2:
        raise InvalidArgumentError(f"N must be >= 2, got {N}")


@dataclass(frozen=True)
class PhysicalParams:
    hbar: float
    mass: float
    a: float
    mu: float

    def __post_init__(self):
        for name in ("hbar", "mass", "a", "mu"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be a positive finite number, got {v}")

    @property
    def energy_scale(self) -> float:
        """E_a = hbar^2 / (2 m a^2)."""
        return self.hbar**2 / (2.0 * self.mass * self.a**2)


@dataclass(frozen=True)
class EnergyPartition:
    kinetic_exponent: float
    potential_exponent: float

    def describe(self) -> str:
        return f"kinetic {_fraction_text(self.kinetic_exponent)}, potential {_fraction_text(self.potential_exponent)}"


def _fraction_text(x: float) -> str:
    f = Fraction(x).limit_denominator(1000)
    if abs(float(f) - x) > 1e-12:
        return f"{x:.6g}"
    return str(f)


def beta_of(N: float) -> float:
    _check_N(N)
    return (N + 2.0) / 2.0


def sigma(params: PhysicalParams, N: float) -> float:
    """(mu / E_a)^(1/(N+2)); tends to 1 as N -> inf."""
    _check_N(N)
    if math.isinf(N):
        return 1.0
    return (params.mu / params.energy_scale) ** (1.0 / (N + 2.0))


def partition(N: float) -> EnergyPartition:
    inv_beta = 1.0 / beta_of(N)
    # the kinetic exponent is defined as the complement so the pair sums to exactly 1.0
    return EnergyPartition(kinetic_exponent=1.0 - inv_beta, potential_exponent=inv_beta)


def lambda_to_energy(lam: float, params: PhysicalParams, N: float) -> float:
    """Physical energy E = lambda * E_a^(1-1/beta) * mu^(1/beta)."""
    p = partition(N)
    return lam * params.energy_scale**p.kinetic_exponent * params.mu**p.potential_exponent


def energy_via_sigma(lam: float, params: PhysicalParams, N: float) -> float:
    """The same energy written as lambda * sigma^2 * E_a."""
    return lam * sigma(params, N) ** 2 * params.energy_scale


def energy_to_lambda(E: float, params: PhysicalParams, N: float) -> float:
    """lambda = E / (sigma^2 E_a), the inverse of :func:`lambda_to_energy`."""
    return E / (sigma(params, N) ** 2 * params.energy_scale)


def to_physical_length(xi_star: float, params: PhysicalParams, N: float) -> float:
    """x = a * xi* / sigma."""
    return params.a * xi_star / sigma(params, N)
