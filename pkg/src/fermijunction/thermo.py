"""Particle/energy currents and entropy production for the junction.

Currents are traces of per-bath generator pieces against the number and
energy operators: I_l = Tr(D_l[rho] N) and J_l = Tr(D_l[rho] H) with
D_l = -(N_l + S_l), the part of d rho/dt owned by reservoir l.  Positive
values mean flow from the reservoir into the system.  The unitary
commutator contributes nothing because [N, H] = 0; this is asserted
numerically once per process as a cheap basis/sign check.

The semi-classical entropy production rate

    S_dot = -J_1 (1/T1 - 1/T2) + I_1 (mu1/T1 - mu2/T2)

is provably nonnegative at leading order in (coupling / tunneling) for a
symmetric weakly tunneling junction; outside that regime the report
carries ``epr_regime_ok = False`` instead of clipping the value.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .liouvillian import DIM, Liouvillian, NessResult, number_operator
from .model import BathParams, EigenBasis, SystemParams, fermi_occupation, occupation_moments

__all__ = [
    "ThermoReport",
    "particle_current",
    "energy_current",
    "entropy_production_rate",
    "transport_report",
    "ness_leading_order",
    "epr_leading_order",
    "epr_regime_ok",
]


@dataclass(frozen=True)
class ThermoReport:
    """Currents into the system from each reservoir plus the EPR.

    ``epr_regime_ok`` is False when the parameters leave the validated
    weak-tunneling window, where the semi-classical EPR may go negative.
    """

    i1: float
    i2: float
    j1: float
    j2: float
    epr: float
    epr_regime_ok: bool


def _apply(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return (superop @ rho.flatten(order="F")).reshape(DIM, DIM, order="F")


def particle_current(rho: np.ndarray, d_bath: np.ndarray) -> float:
    """Particle current from one reservoir into the system."""
    return float(np.trace(_apply(d_bath, rho) @ number_operator()).real)


def energy_current(rho: np.ndarray, d_bath: np.ndarray, h_s: np.ndarray) -> float:
    """Energy current from one reservoir into the system."""
    return float(np.trace(_apply(d_bath, rho) @ h_s).real)


def entropy_production_rate(j1: float, i1: float, baths: BathParams) -> float:
    """Semi-classical entropy production rate of the two reservoirs."""
    return -j1 * (1.0 / baths.t1 - 1.0 / baths.t2) + i1 * (
        baths.mu1 / baths.t1 - baths.mu2 / baths.t2
    )


def epr_regime_ok(params: SystemParams) -> bool:
    """True inside the window where the EPR positivity argument applies:
    symmetric junction, |delta| <= 0.01 omega, mean coupling <= |delta|/2."""
    if abs(params.omega1 - params.omega2) > 1e-12 * params.omega1:
        return False
    if abs(params.delta) > 0.01 * params.omega1 * (1.0 + 1e-12):
        return False
    mean_gamma = 0.5 * (params.gamma1 + params.gamma2)
    return mean_gamma <= 0.5 * abs(params.delta) * (1.0 + 1e-12)


_unitary_checked = False


def _check_unitary_silent(lv: Liouvillian, rho: np.ndarray) -> None:
    """One-time sanity check: the commutator part of the generator must
    not move particle number or energy (it commutes with both)."""
    global _unitary_checked
    if _unitary_checked:
        return
    flow = _apply(lv.unitary, rho)
    n_leak = abs(np.trace(flow @ number_operator()))
    e_leak = abs(np.trace(flow @ lv.hamiltonian))
    if max(n_leak, e_leak) > 1e-10:
        raise AssertionError(
            f"unitary part moves conserved charges (N leak {n_leak:.3e}, "
            f"E leak {e_leak:.3e}); basis or sign convention broken"
        )
    _unitary_checked = True


def transport_report(result: NessResult, params: SystemParams, baths: BathParams) -> ThermoReport:
    """Currents and EPR for a solved steady state."""
    lv = result.liouvillian
    _check_unitary_silent(lv, result.rho)
    h_s = lv.hamiltonian
    i1 = particle_current(result.rho, lv.bath1)
    i2 = particle_current(result.rho, lv.bath2)
    j1 = energy_current(result.rho, lv.bath1, h_s)
    j2 = energy_current(result.rho, lv.bath2, h_s)
    return ThermoReport(
        i1=i1,
        i2=i2,
        j1=j1,
        j2=j2,
        epr=entropy_production_rate(j1, i1, baths),
        epr_regime_ok=epr_regime_ok(params),
    )


def ness_leading_order(
    basis: EigenBasis, baths: BathParams, params: SystemParams
) -> np.ndarray:
    """Analytic steady state to first order in g = coupling / tunneling.

    Populations factorize over the two modes through the half-sum
    occupations; the single coherence is -i (n1m + n2m) g / 2.  Valid for
    |g| << 1; a warning is emitted above |g| = 0.2.
    """
    if params.delta == 0.0:
        raise ValueError("leading-order solution requires nonzero tunneling")
    g = 0.5 * (params.gamma1 + params.gamma2) / params.delta
    if abs(g) > 0.2:
        warnings.warn(
            f"leading-order state requested at g = {g:.3f}; "
            "first-order accuracy degrades above 0.2",
            stacklevel=2,
        )
    n1p, n2p, n1m, n2m = occupation_moments(basis, baths)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (1.0 - n1p) * (1.0 - n2p)
    rho[1, 1] = n1p * (1.0 - n2p)
    rho[2, 2] = n2p * (1.0 - n1p)
    rho[3, 3] = n1p * n2p
    rho[1, 2] = -0.5j * (n1m + n2m) * g
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


def epr_leading_order(baths: BathParams, omega: float, gamma: float | None = None) -> float:
    """Leading-order entropy production rate; manifestly nonnegative.

    Evaluates (ln A - ln B)(A - B) / [(e^{mu1 b1} + e^{omega b1})
    (e^{mu2 b2} + e^{omega b2})] with A = e^{mu1 b1 + omega b2},
    B = e^{mu2 b2 + omega b1} and b_i = 1/T_i, through the equivalent
    overflow-free form

        (ln A - ln B) * [n(omega, T1, mu1) - n(omega, T2, mu2)].

    Both factors share the sign of (mu1 b1 + omega b2) - (mu2 b2 + omega b1),
    so the product is >= 0 and vanishes exactly when that combination does.

    With ``gamma`` omitted the result carries the conventional b1*b2
    normalization; passing the coupling rate instead scales the result by
    gamma, which is the quantity the numeric EPR converges to as g -> 0.
    """
    b1 = 1.0 / baths.t1
    b2 = 1.0 / baths.t2
    affinity = (baths.mu1 * b1 + omega * b2) - (baths.mu2 * b2 + omega * b1)
    occ_gap = fermi_occupation(omega, baths.t1, baths.mu1) - fermi_occupation(
        omega, baths.t2, baths.mu2
    )
    scale = gamma if gamma is not None else b1 * b2
    return scale * affinity * occ_gap
