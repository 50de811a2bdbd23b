"""Generator construction and steady-state solving."""
import numpy as np
import pytest

from fermijunction import (
    BathParams,
    DegenerateNullSpaceError,
    SystemParams,
    build_liouvillian,
    diagonalize,
    fermi_occupation,
    grand_canonical_state,
    hamiltonian,
    mode_operators,
    number_operator,
    solve_ness,
    steady_state,
    steady_state_svd,
)
from fermijunction.liouvillian import DIM


def vec(rho):
    return rho.flatten(order="F")


def unvec(v):
    return v.reshape(DIM, DIM, order="F")


def random_state(rng):
    a = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_setup(rng):
    params = SystemParams(
        omega1=rng.uniform(0.5, 1.5),
        omega2=rng.uniform(0.5, 1.5),
        delta=rng.uniform(-0.2, 0.2),
        gamma1=rng.uniform(1e-4, 0.05),
        gamma2=rng.uniform(1e-4, 0.05),
    )
    baths = BathParams(
        t1=rng.uniform(0.05, 1.0),
        t2=rng.uniform(0.05, 1.0),
        mu1=rng.uniform(0.0, 2.0),
        mu2=rng.uniform(0.0, 2.0),
    )
    return params, baths


def test_mode_operators_fermionic_algebra():
    z1, z2, z1d, z2d = mode_operators()
    eye = np.eye(DIM)
    zero = np.zeros((DIM, DIM))
    np.testing.assert_allclose(z1 @ z1d + z1d @ z1, eye, atol=1e-14)
    np.testing.assert_allclose(z2 @ z2d + z2d @ z2, eye, atol=1e-14)
    np.testing.assert_allclose(z1 @ z2d + z2d @ z1, zero, atol=1e-14)
    np.testing.assert_allclose(z1 @ z2 + z2 @ z1, zero, atol=1e-14)
    np.testing.assert_allclose(z1 @ z1, zero, atol=1e-14)
    np.testing.assert_allclose(z2 @ z2, zero, atol=1e-14)


def test_mode_operators_parity_sign():
    # zeta2_dag acting on the mode-1-occupied state carries the string sign
    z1, z2, z1d, z2d = mode_operators()
    ket10 = np.zeros(DIM)
    ket10[1] = 1.0
    np.testing.assert_allclose(z2d @ ket10, [0.0, 0.0, 0.0, -1.0], atol=1e-15)
    ket00 = np.zeros(DIM)
    ket00[0] = 1.0
    np.testing.assert_allclose(z2d @ ket00, [0.0, 0.0, 1.0, 0.0], atol=1e-15)
    # number operator assembled from the modes matches the diagonal form
    np.testing.assert_allclose(z1d @ z1 + z2d @ z2, number_operator(), atol=1e-15)


def test_hamiltonian_counts_mode_energies():
    basis = diagonalize(SystemParams(omega1=1.1, omega2=0.9, delta=0.1))
    h = hamiltonian(basis)
    np.testing.assert_allclose(np.diag(h).imag, 0.0)
    assert h[3, 3] == pytest.approx(basis.omega_p1 + basis.omega_p2)
    assert np.allclose(h @ number_operator(), number_operator() @ h)


def test_generator_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(201)
    for _ in range(25):
        params, baths = random_setup(rng)
        lv = build_liouvillian(diagonalize(params), baths, params)
        rho = random_state(rng)
        drho = unvec(lv.matrix @ vec(rho))
        assert abs(np.trace(drho)) < 1e-14
        np.testing.assert_allclose(drho, drho.conj().T, atol=1e-14)


def test_generator_keeps_x_block_closed():
    # the dynamics never populates entries outside the diagonal plus the
    # coherence between the singly occupied states
    rng = np.random.default_rng(202)
    x_vec_indices = {0, 5, 10, 15, 6, 9}
    for _ in range(25):
        params, baths = random_setup(rng)
        lv = build_liouvillian(diagonalize(params), baths, params)
        v = np.zeros(DIM * DIM, dtype=complex)
        diag = rng.dirichlet(np.ones(4))
        v[[0, 5, 10, 15]] = diag
        coh = rng.uniform(0, 0.2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        v[6], v[9] = coh, np.conj(coh)
        image = lv.matrix @ v
        outside = [abs(image[k]) for k in range(16) if k not in x_vec_indices]
        assert max(outside) < 1e-15


def test_gibbs_state_is_stationary_at_equilibrium():
    # exact at any coupling strength, not only weakly coupled
    rng = np.random.default_rng(203)
    for _ in range(20):
        t = rng.uniform(0.05, 1.0)
        mu = rng.uniform(0.0, 2.0)
        params = SystemParams(
            omega1=rng.uniform(0.5, 1.5),
            omega2=rng.uniform(0.5, 1.5),
            delta=rng.uniform(-0.3, 0.3),
            gamma1=rng.uniform(0.01, 0.3),
            gamma2=rng.uniform(0.01, 0.3),
        )
        baths = BathParams(t1=t, t2=t, mu1=mu, mu2=mu)
        basis = diagonalize(params)
        lv = build_liouvillian(basis, baths, params)
        gibbs = grand_canonical_state(basis, t, mu)
        assert np.linalg.norm(lv.matrix @ vec(gibbs)) < 1e-13


def test_grand_canonical_state_matches_expm():
    from scipy.linalg import expm

    basis = diagonalize(SystemParams(omega1=1.3, omega2=0.8, delta=0.07))
    t, mu = 0.35, 0.6
    direct = expm(-(hamiltonian(basis) - mu * number_operator()) / t)
    direct = direct / np.trace(direct)
    np.testing.assert_allclose(
        grand_canonical_state(basis, t, mu), direct, atol=1e-14
    )


def test_steady_state_matches_svd_oracle():
    rng = np.random.default_rng(204)
    for _ in range(20):
        params, baths = random_setup(rng)
        lv = build_liouvillian(diagonalize(params), baths, params)
        rho_a = steady_state(lv)
        rho_b = steady_state_svd(lv)
        np.testing.assert_allclose(rho_a, rho_b, atol=1e-10)


def test_steady_state_properties():
    rng = np.random.default_rng(205)
    for _ in range(20):
        params, baths = random_setup(rng)
        result = solve_ness(params, baths)
        rho = result.rho
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(rho).min() > -1e-9
        assert result.residual < 1e-10


def test_null_space_is_one_dimensional():
    params = SystemParams()
    baths = BathParams(t1=0.2, t2=0.6, mu1=1.0, mu2=0.3)
    lv = build_liouvillian(diagonalize(params), baths, params)
    svals = np.linalg.svd(lv.matrix, compute_uv=False)
    assert np.sum(svals < 1e-10 * svals[0]) == 1


def test_uncoupled_generator_is_degenerate():
    params = SystemParams(gamma1=0.0, gamma2=0.0)
    baths = BathParams()
    lv = build_liouvillian(diagonalize(params), baths, params)
    with pytest.raises(DegenerateNullSpaceError) as err:
        steady_state(lv)
    assert err.value.dimension > 1
    with pytest.raises(DegenerateNullSpaceError):
        steady_state_svd(lv)


def test_decoupled_sites_thermalize_to_own_reservoirs():
    # delta = 0 with distinct site energies: each site equilibrates with
    # its own bath, populations factorize over the two occupations
    params = SystemParams(omega1=1.2, omega2=0.9, delta=0.0)
    baths = BathParams(t1=0.15, t2=0.4, mu1=1.0, mu2=0.2)
    result = solve_ness(params, baths)
    n1 = fermi_occupation(1.2, 0.15, 1.0)
    n2 = fermi_occupation(0.9, 0.4, 0.2)
    # mode 1 is the higher site (site 1), mode 2 the lower (site 2)
    expected = np.diag(
        [(1 - n1) * (1 - n2), n1 * (1 - n2), n2 * (1 - n1), n1 * n2]
    )
    np.testing.assert_allclose(result.rho, expected, atol=1e-13)
