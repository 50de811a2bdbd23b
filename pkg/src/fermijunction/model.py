"""Single-particle model of a two-site fermionic junction.

Two tunnel-coupled fermionic sites, each attached to its own wide-band
reservoir.  The quadratic part of the Hamiltonian is diagonalized exactly
by a 2x2 rotation; everything downstream (dissipators, steady state,
transport) works in the resulting delocalized-mode basis.

Units: hbar = k_B = 1 throughout.  Energies, temperatures and chemical
potentials share the same unit; rates are energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SystemParams",
    "BathParams",
    "EigenBasis",
    "diagonalize",
    "fermi_occupation",
    "occupation_moments",
]


@dataclass(frozen=True)
class SystemParams:
    """Junction parameters.

    omega1, omega2 : bare site energies (> 0)
    delta          : tunneling amplitude between the sites (any real)
    gamma1, gamma2 : wide-band decay rates into reservoir 1 and 2 (>= 0)
    """

    omega1: float = 1.0
    omega2: float = 1.0
    delta: float = 0.005
    gamma1: float = 0.002
    gamma2: float = 0.002

    def __post_init__(self):
        if not (self.omega1 > 0.0 and self.omega2 > 0.0):
            raise ValueError("site energies omega1, omega2 must be positive")
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            raise ValueError("decay rates gamma1, gamma2 must be nonnegative")


@dataclass(frozen=True)
class BathParams:
    """Reservoir parameters: temperatures and chemical potentials.

    Temperatures must be strictly positive; the T -> 0 step function is
    not supported (occupations would lose the smoothness the solver and
    the finite-difference metrology rely on).
    """

    t1: float = 0.2
    t2: float = 0.2
    mu1: float = 0.5
    mu2: float = 0.5

    def __post_init__(self):
        if not (self.t1 > 0.0 and self.t2 > 0.0):
            raise ValueError("temperatures t1, t2 must be strictly positive")


@dataclass(frozen=True)
class EigenBasis:
    """Diagonalized single-particle data.

    omega_p1 >= omega_p2 are the dressed mode energies and
    (cos_theta, sin_theta) fix the 2x2 rotation from site to mode
    operators.  ``degenerate`` marks the point omega1 == omega2,
    delta == 0 where the angle is a pure convention (theta = pi/2).
    """

    omega_p1: float
    omega_p2: float
    cos_theta: float
    sin_theta: float
    degenerate: bool = False


def diagonalize(params: SystemParams) -> EigenBasis:
    """Diagonalize the single-particle Hamiltonian of the junction.

    Returns the dressed energies

        omega'_{1,2} = (omega1 + omega2)/2 +- sqrt((omega1-omega2)^2 + 4 delta^2)/2

    and the rotation angle theta = atan2(2 delta, omega2 - omega1), so
    sin(theta) >= 0 for delta >= 0.  Mode 1 always carries the larger
    energy.  For delta -> 0 with omega2 > omega1 the rotation becomes the
    swap (mode 1 is site 2); with omega1 > omega2 it is the identity.
    """
    half_sum = 0.5 * (params.omega1 + params.omega2)
    split = math.hypot(params.omega1 - params.omega2, 2.0 * params.delta)
    if split == 0.0:
        # omega1 == omega2 and delta == 0: the rotation is arbitrary.
        return EigenBasis(half_sum, half_sum, 0.0, 1.0, degenerate=True)
    theta = math.atan2(2.0 * params.delta, params.omega2 - params.omega1)
    return EigenBasis(
        omega_p1=half_sum + 0.5 * split,
        omega_p2=half_sum - 0.5 * split,
        cos_theta=math.cos(theta),
        sin_theta=math.sin(theta),
    )


def fermi_occupation(omega: float, t: float, mu: float) -> float:
    """Fermi-Dirac occupation 1/(exp((omega-mu)/t) + 1).

    Strictly in (0, 1) for t > 0.  Large |omega - mu|/t is handled
    through the stable exp(-|x|) form, so no overflow warnings.
    """
    if t <= 0.0:
        raise ValueError("temperature must be strictly positive")
    x = (omega - mu) / t
    if x >= 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def occupation_moments(
    basis: EigenBasis, baths: BathParams
) -> tuple[float, float, float, float]:
    """Half-sum and half-difference of the two reservoir occupations.

    Returns (n1p, n2p, n1m, n2m) where

        n_{a,p/m} = [n(omega'_a, T1, mu1) +- n(omega'_a, T2, mu2)] / 2

    for mode a = 1, 2.  The p-moments drive the leading-order NESS
    populations, the m-moments its coherence and the currents.
    """
    n1_b1 = fermi_occupation(basis.omega_p1, baths.t1, baths.mu1)
    n1_b2 = fermi_occupation(basis.omega_p1, baths.t2, baths.mu2)
    n2_b1 = fermi_occupation(basis.omega_p2, baths.t1, baths.mu1)
    n2_b2 = fermi_occupation(basis.omega_p2, baths.t2, baths.mu2)
    n1p = 0.5 * (n1_b1 + n1_b2)
    n2p = 0.5 * (n2_b1 + n2_b2)
    n1m = 0.5 * (n1_b1 - n1_b2)
    n2m = 0.5 * (n2_b1 - n2_b2)
    return n1p, n2p, n1m, n2m
