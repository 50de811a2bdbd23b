"""Currents, entropy production and the leading-order analytic forms."""
import math

import numpy as np
import pytest

from fermijunction import (
    BathParams,
    SystemParams,
    diagonalize,
    entropy_production_rate,
    epr_leading_order,
    epr_regime_ok,
    fermi_occupation,
    ness_leading_order,
    solve_ness,
    transport_report,
)


def report_at(params, baths):
    return transport_report(solve_ness(params, baths), params, baths)


def test_current_signs_chemical_bias():
    params = SystemParams()
    rep = report_at(params, BathParams(t1=0.2, t2=0.2, mu1=0.9, mu2=0.5))
    # particles flow from the full reservoir into the system and out the other
    assert rep.i1 > 0.0
    assert rep.i2 < 0.0
    assert rep.epr > 0.0


def test_current_signs_thermal_bias():
    params = SystemParams()
    rep = report_at(params, BathParams(t1=0.2, t2=0.8, mu1=0.5, mu2=0.5))
    # the hot side feeds energy in (mode energies sit above mu)
    assert rep.j2 > 0.0
    assert rep.j1 < 0.0
    assert rep.epr > 0.0


def test_conservation_random():
    rng = np.random.default_rng(501)
    for _ in range(30):
        params = SystemParams(
            omega1=rng.uniform(0.5, 1.5),
            omega2=rng.uniform(0.5, 1.5),
            delta=rng.uniform(-0.2, 0.2),
            gamma1=rng.uniform(1e-4, 0.02),
            gamma2=rng.uniform(1e-4, 0.02),
        )
        baths = BathParams(
            t1=rng.uniform(0.05, 1.0),
            t2=rng.uniform(0.05, 1.0),
            mu1=rng.uniform(0.0, 2.0),
            mu2=rng.uniform(0.0, 2.0),
        )
        rep = report_at(params, baths)
        assert abs(rep.i1 + rep.i2) < 1e-12
        assert abs(rep.j1 + rep.j2) < 1e-12


def test_equilibrium_everything_vanishes():
    params = SystemParams()
    rep = report_at(params, BathParams(t1=0.3, t2=0.3, mu1=0.7, mu2=0.7))
    for value in (rep.i1, rep.i2, rep.j1, rep.j2, rep.epr):
        assert abs(value) < 1e-15


def test_energy_rides_at_mode_frequency():
    # weak symmetric tunneling: every transferred particle carries about
    # one quantum of the (nearly common) mode energy
    params = SystemParams(delta=0.005)
    rep = report_at(params, BathParams(t1=0.1, t2=0.1, mu1=1.3, mu2=0.5))
    assert rep.j1 / rep.i1 == pytest.approx(1.0, rel=1e-2)


def test_bath_swap_antisymmetry():
    params = SystemParams(delta=0.005)
    fwd = report_at(params, BathParams(t1=0.2, t2=0.45, mu1=0.9, mu2=0.3))
    rev = report_at(params, BathParams(t1=0.45, t2=0.2, mu1=0.3, mu2=0.9))
    assert rev.i1 == pytest.approx(-fwd.i1, abs=1e-12)
    assert rev.j1 == pytest.approx(-fwd.j1, abs=1e-12)
    assert rev.epr == pytest.approx(fwd.epr, abs=1e-12)


def test_entropy_production_rate_formula():
    baths = BathParams(t1=0.2, t2=0.4, mu1=0.9, mu2=0.3)
    j1, i1 = 3e-4, 5e-4
    expected = -j1 * (1 / 0.2 - 1 / 0.4) + i1 * (0.9 / 0.2 - 0.3 / 0.4)
    assert entropy_production_rate(j1, i1, baths) == pytest.approx(expected)


def test_epr_regime_flag():
    assert epr_regime_ok(SystemParams(delta=0.005, gamma1=0.002, gamma2=0.002))
    assert not epr_regime_ok(SystemParams(delta=0.05))  # strong tunneling
    assert not epr_regime_ok(SystemParams(delta=0.005, gamma1=0.01, gamma2=0.01))
    assert not epr_regime_ok(SystemParams(omega1=1.0, omega2=1.2, delta=0.005))


def test_ness_leading_order_matches_solver():
    params = SystemParams(delta=0.005, gamma1=2e-4, gamma2=2e-4)
    baths = BathParams(t1=0.2, t2=0.5, mu1=0.9, mu2=0.5)
    result = solve_ness(params, baths)
    approx = ness_leading_order(result.basis, baths, params)
    # g = 0.04: deviations are second order, well below 1e-3
    assert np.abs(result.rho - approx).max() < 2e-4
    assert np.trace(approx).real == pytest.approx(1.0, abs=1e-14)


def test_ness_leading_order_saturates_at_extreme_bias():
    # one reservoir full, the other empty for both modes
    params = SystemParams(delta=0.005)
    baths = BathParams(t1=0.05, t2=0.05, mu1=3.0, mu2=-1.0)
    basis = diagonalize(params)
    with pytest.warns(UserWarning):  # g = 0.4 is outside the trusted window
        rho = ness_leading_order(basis, baths, params)
    g = 0.002 / 0.005
    np.testing.assert_allclose(np.diag(rho).real, [0.25] * 4, atol=1e-8)
    assert rho[1, 2] == pytest.approx(-0.5j * g, abs=1e-8)


def test_ness_leading_order_guards():
    params = SystemParams(delta=0.0)
    baths = BathParams()
    with pytest.raises(ValueError):
        ness_leading_order(diagonalize(params), baths, params)
    strong = SystemParams(delta=0.005, gamma1=0.01, gamma2=0.01)
    with pytest.warns(UserWarning):
        ness_leading_order(diagonalize(strong), baths, strong)


def test_epr_leading_order_matches_expanded_form():
    # oracle: the same rate with every exponential written out longhand,
    # no shared factors, so an algebra slip in the packaged form shows up
    def expanded(baths, omega):
        b1, b2 = 1.0 / baths.t1, 1.0 / baths.t2
        m1, m2 = baths.mu1, baths.mu2
        affinity = (m1 * b1 + omega * b2) - (m2 * b2 + omega * b1)
        bracket = (
            2 * math.exp(2 * m1 * b1 + (m2 + omega) * b2)
            + 2 * math.exp(m1 * b1 + omega * b1 + 2 * omega * b2)
            - 2 * math.exp(2 * m2 * b2 + (m1 + omega) * b1)
            - 2 * math.exp(m2 * b2 + 2 * omega * b1 + omega * b2)
            + 2 * math.exp(2 * (m1 * b1 + omega * b2))
            - 2 * math.exp(2 * (m2 * b2 + omega * b1))
        )
        norm = (
            2.0
            * (math.exp(m1 * b1) + math.exp(omega * b1)) ** 2
            * (math.exp(m2 * b2) + math.exp(omega * b2)) ** 2
            / (b1 * b2)
        )
        return affinity * bracket / norm

    cases = [
        (BathParams(t1=0.2, t2=0.5, mu1=0.9, mu2=0.5), 1.0),
        (BathParams(t1=0.3, t2=0.25, mu1=0.1, mu2=1.2), 0.8),
        (BathParams(t1=1.0, t2=0.4, mu1=1.5, mu2=0.2), 1.3),
    ]
    for baths, omega in cases:
        assert epr_leading_order(baths, omega) == pytest.approx(
            expanded(baths, omega), rel=1e-12
        )


def test_epr_leading_order_zero_on_the_affinity_surface():
    # beta1 mu1 + omega beta2 = beta2 mu2 + omega beta1 with unequal baths
    baths = BathParams(t1=0.25, t2=0.5, mu1=0.75, mu2=0.5)
    assert epr_leading_order(baths, 1.0) == 0.0
    assert epr_leading_order(BathParams(t1=0.3, t2=0.3, mu1=0.7, mu2=0.7), 1.0) == 0.0


def test_epr_leading_order_nonnegative_random():
    rng = np.random.default_rng(502)
    for _ in range(1000):
        baths = BathParams(
            t1=rng.uniform(0.05, 1.0),
            t2=rng.uniform(0.05, 1.0),
            mu1=rng.uniform(0.0, 2.0),
            mu2=rng.uniform(0.0, 2.0),
        )
        assert epr_leading_order(baths, rng.uniform(0.5, 2.0)) >= 0.0


def test_numeric_epr_converges_to_leading_order():
    baths = BathParams(t1=0.2, t2=0.5, mu1=0.9, mu2=0.5)
    ratios = []
    for gamma in (4e-4, 2e-4, 1e-4):
        params = SystemParams(delta=0.005, gamma1=gamma, gamma2=gamma)
        rep = report_at(params, baths)
        ratios.append(rep.epr / epr_leading_order(baths, 1.0, gamma=gamma))
    assert ratios[0] == pytest.approx(1.0, rel=1e-2)
    assert ratios[-1] == pytest.approx(1.0, rel=2e-3)
    # the gamma keyword only rescales the dimensionless form
    base = epr_leading_order(baths, 1.0)
    b1b2 = (1 / 0.2) * (1 / 0.5)
    assert epr_leading_order(baths, 1.0, gamma=3e-4) == pytest.approx(
        base * 3e-4 / b1b2, rel=1e-12
    )


def test_transport_report_carries_regime_flag():
    weak = SystemParams(delta=0.005)
    strong = SystemParams(delta=0.05)
    baths = BathParams(t1=0.1, t2=0.4, mu1=0.8, mu2=0.5)
    assert report_at(weak, baths).epr_regime_ok
    assert not report_at(strong, baths).epr_regime_ok


def test_fermi_occupation_drives_current_direction():
    # current sign follows the occupation difference at the mode energies
    params = SystemParams(delta=0.005)
    basis = diagonalize(params)
    baths = BathParams(t1=0.15, t2=0.6, mu1=0.2, mu2=0.2)
    rep = report_at(params, baths)
    occ_gap = fermi_occupation(basis.omega_p1, 0.15, 0.2) - fermi_occupation(
        basis.omega_p1, 0.6, 0.2
    )
    assert math.copysign(1.0, rep.i1) == math.copysign(1.0, occ_gap)
