"""Analytic-limit verification battery behind the ``verify`` subcommand.

Every check compares the numerics against a limit that is known in
closed form (equilibrium Gibbs state, leading-order steady state,
conservation laws, entropy production positivity, independent QFI
routes, exhaustive discord search).  Output is deterministic text, one
PASS/FAIL line per check.
"""
from __future__ import annotations

import math
import sys
from typing import Callable, TextIO

import numpy as np

from .liouvillian import grand_canonical_state, solve_ness
from .metrology import qfi_equilibrium_approx, qfi_fidelity_oracle, qfi_spectral
from .model import BathParams, SystemParams
from .observables import (
    SpectralDecomp,
    discord,
    discord_brute_force,
    spectral_decompose,
    spectral_reconstruct,
)
from .thermo import epr_leading_order, ness_leading_order, transport_report

__all__ = ["run_verification", "CHECKS"]


def _check_equilibrium_gibbs() -> tuple[bool, str]:
    params = SystemParams(delta=0.005, gamma1=0.0002, gamma2=0.0002)
    baths = BathParams(t1=0.2, t2=0.2, mu1=0.5, mu2=0.5)
    result = solve_ness(params, baths)
    gibbs = grand_canonical_state(result.basis, 0.2, 0.5)
    diag_dev = float(
        np.max(np.abs(np.diag(result.rho) - np.diag(gibbs)) / np.diag(gibbs).real)
    )
    coh = abs(result.rho[1, 2])
    ok = diag_dev < 1e-4 and coh < 1e-8
    return ok, f"diagonal rel dev {diag_dev:.3e}, coherence {coh:.3e}"


def _check_leading_order_slope() -> tuple[bool, str]:
    baths = BathParams(t1=0.2, t2=0.5, mu1=0.9, mu2=0.5)
    gammas = (0.001, 0.0005, 0.00025)
    devs = []
    for gamma in gammas:
        params = SystemParams(delta=0.005, gamma1=gamma, gamma2=gamma)
        result = solve_ness(params, baths)
        ref = ness_leading_order(result.basis, baths, params)
        devs.append(float(np.abs(result.rho - ref).max()))
    slope = np.polyfit(np.log([g / 0.005 for g in gammas]), np.log(devs), 1)[0]
    ok = 1.7 <= slope <= 2.3
    return ok, f"deviation slope {slope:.3f} (want 2 +- 0.3)"


def _check_conservation() -> tuple[bool, str]:
    worst = 0.0
    for t2 in np.linspace(0.2, 1.2, 6):
        for mu in np.linspace(0.0, 2.0, 6):
            params = SystemParams(delta=0.005)
            baths = BathParams(t1=0.2, t2=float(t2), mu1=float(mu), mu2=float(mu))
            result = solve_ness(params, baths)
            rep = transport_report(result, params, baths)
            worst = max(worst, abs(rep.i1 + rep.i2), abs(rep.j1 + rep.j2))
    ok = worst < 1e-10
    return ok, f"max |I1+I2|, |J1+J2| = {worst:.3e}"


def _check_epr_positivity() -> tuple[bool, str]:
    lowest = math.inf
    for t2 in np.linspace(0.2, 1.2, 6):
        for mu in np.linspace(0.0, 2.0, 6):
            params = SystemParams(delta=0.005)
            baths = BathParams(t1=0.2, t2=float(t2), mu1=float(mu), mu2=float(mu))
            result = solve_ness(params, baths)
            rep = transport_report(result, params, baths)
            lowest = min(lowest, rep.epr)
    rng = np.random.default_rng(20240811)
    lead_min = math.inf
    for _ in range(2000):
        t1, t2 = rng.uniform(0.05, 1.0, size=2)
        mu1, mu2 = rng.uniform(0.0, 2.0, size=2)
        omega = rng.uniform(0.5, 2.0)
        lead = epr_leading_order(BathParams(t1=t1, t2=t2, mu1=mu1, mu2=mu2), omega)
        lead_min = min(lead_min, lead)
    ok = lowest > -1e-10 and lead_min >= 0.0
    return ok, f"min numeric EPR {lowest:.3e}, min leading-order EPR {lead_min:.3e}"


def _check_qfi_cross() -> tuple[bool, str]:
    rng = np.random.default_rng(20240812)
    worst = 0.0
    for _ in range(5):
        delta = float(np.exp(rng.uniform(np.log(0.003), np.log(0.08))))
        params = SystemParams(delta=delta, gamma1=rng.uniform(5e-4, 2e-3),
                              gamma2=rng.uniform(5e-4, 2e-3))
        t1 = rng.uniform(0.1, 0.4)
        baths = BathParams(
            t1=t1,
            t2=t1 + rng.uniform(0.0, 0.6),
            mu1=rng.uniform(0.1, 1.4),
            mu2=rng.uniform(0.1, 1.4),
        )
        spectral = qfi_spectral(params, baths).f_total
        oracle = qfi_fidelity_oracle(params, baths)
        worst = max(worst, abs(spectral - oracle) / spectral)
    params = SystemParams(delta=0.005, gamma1=1e-4, gamma2=1e-4)
    baths = BathParams(t1=0.2, t2=0.2, mu1=0.5, mu2=0.5)
    approx = qfi_equilibrium_approx(params, 0.2, 0.5)
    spectral = qfi_spectral(params, baths).f_total
    eq_dev = abs(spectral - approx) / approx
    ok = worst < 1e-3 and eq_dev < 0.01
    return ok, f"max cross-route rel dev {worst:.3e}, equilibrium closed-form dev {eq_dev:.3e}"


def _random_x_state(rng: np.random.Generator) -> np.ndarray:
    p = rng.dirichlet(np.ones(4))
    mag = rng.uniform(0.0, math.sqrt(p[1] * p[2]))
    phase = rng.uniform(0.0, 2.0 * math.pi)
    decomp_free = np.zeros((4, 4), dtype=complex)
    decomp_free[0, 0] = p[0]
    decomp_free[1, 1] = p[1]
    decomp_free[2, 2] = p[2]
    decomp_free[3, 3] = p[3]
    decomp_free[1, 2] = mag * np.exp(1j * phase)
    decomp_free[2, 1] = np.conj(decomp_free[1, 2])
    return decomp_free


def _check_discord_oracle() -> tuple[bool, str]:
    rng = np.random.default_rng(20240813)
    worst_short = 0.0
    for _ in range(3):
        rho = _random_x_state(rng)
        opt = discord(rho).classical_corr
        grid = discord_brute_force(rho, resolution=200).classical_corr
        worst_short = max(worst_short, grid - opt)
    ok = worst_short < 1e-6
    return ok, f"max (grid - optimizer) = {worst_short:.3e}"


def _check_spectral_roundtrip() -> tuple[bool, str]:
    decomp = SpectralDecomp(p1=0.3, p2=0.35, p3=0.15, p4=0.2, alpha=1.1, phi=-2.0)
    rho = spectral_reconstruct(decomp)
    params = SystemParams(delta=0.01)
    baths = BathParams(t1=0.15, t2=0.45, mu1=1.1, mu2=0.4)
    result = solve_ness(params, baths)
    back = spectral_reconstruct(spectral_decompose(result.rho))
    dev = max(
        float(np.abs(rho - spectral_reconstruct(spectral_decompose(rho))).max()),
        float(np.abs(result.rho - back).max()),
    )
    ok = dev < 1e-12
    return ok, f"reconstruction deviation {dev:.3e}"


CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("equilibrium-gibbs", _check_equilibrium_gibbs),
    ("leading-order-slope", _check_leading_order_slope),
    ("current-conservation", _check_conservation),
    ("epr-positivity", _check_epr_positivity),
    ("qfi-cross-routes", _check_qfi_cross),
    ("discord-oracle", _check_discord_oracle),
    ("spectral-roundtrip", _check_spectral_roundtrip),
)


def run_verification(stream: TextIO | None = None) -> bool:
    """Run all checks, print one line per check, return overall success."""
    if stream is None:
        stream = sys.stdout
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok = all_ok and ok
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    stream.write("verification " + ("passed" if all_ok else "FAILED") + "\n")
    return all_ok
