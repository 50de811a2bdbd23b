"""Redfield-type generator for the junction and its steady state.

The two dressed fermionic modes span a 4-dimensional Fock space ordered as

    {|00>, |10>, |01>, |11>}

(occupations of mode 1, mode 2; index 0 is the empty state, index 3 the
doubly occupied one).  Mode operators follow the Jordan-Wigner
construction

    zeta1 = lower (x) I,     zeta2 = Z (x) lower,

with ``lower`` the 2x2 lowering matrix and ``Z`` the parity matrix, so
zeta2_dag |10> = -|11> (the sign every anticommutation check below relies
on).

Superoperators act on column-stacked density matrices:

    vec(A rho B) = kron(B.T, A) vec(rho),

so entry (i, j) of rho sits at vec index 4*j + i.  The full generator is

    d rho / dt = i [rho, H] - (N1 + S1) - (N2 + S2)

where N_l keeps each mode in touch with reservoir l (occupation-weighted
thermalization) and S_l carries the cross-mode terms a secular
approximation would drop; S_l sources the steady-state coherence between
the singly occupied states.  The per-bath generator piece retained for
currents is D_l = -(N_l + S_l), which is the part of d rho/dt owned by
reservoir l.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import BathParams, EigenBasis, SystemParams, diagonalize, fermi_occupation

__all__ = [
    "DIM",
    "Liouvillian",
    "NessResult",
    "SteadyStateError",
    "DegenerateNullSpaceError",
    "mode_operators",
    "hamiltonian",
    "number_operator",
    "build_dissipators",
    "build_liouvillian",
    "steady_state",
    "steady_state_svd",
    "solve_ness",
    "grand_canonical_state",
]

DIM = 4

# Trace functional on column-stacked 4x4 matrices (diagonal entries).
_TRACE_ROW = np.zeros(DIM * DIM)
_TRACE_ROW[[0, 5, 10, 15]] = 1.0

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
_PARITY = np.diag([1.0, -1.0])
_I2 = np.eye(2)

# Spec'd basis order {|00>,|10>,|01>,|11>} vs the kron order
# {|00>,|01>,|10>,|11>}: swap the middle two indices.
_PERM = np.array([0, 2, 1, 3])


def mode_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation/creation matrices (zeta1, zeta2, zeta1_dag, zeta2_dag)."""
    z1 = np.kron(_LOWER, _I2)[np.ix_(_PERM, _PERM)]
    z2 = np.kron(_PARITY, _LOWER)[np.ix_(_PERM, _PERM)]
    return z1, z2, z1.conj().T, z2.conj().T


_Z1, _Z2, _Z1D, _Z2D = mode_operators()


def hamiltonian(basis: EigenBasis) -> np.ndarray:
    """System Hamiltonian, diagonal in the mode occupation basis."""
    w1, w2 = basis.omega_p1, basis.omega_p2
    return np.diag([0.0, w1, w2, w1 + w2])


def number_operator() -> np.ndarray:
    """Total particle number zeta1_dag zeta1 + zeta2_dag zeta2."""
    return np.diag([0.0, 1.0, 1.0, 2.0])


class DissipatorParts(NamedTuple):
    """The four dissipator superoperators: thermal and mode-mixing, per bath."""

    n1: np.ndarray
    n2: np.ndarray
    s1: np.ndarray
    s2: np.ndarray


class SteadyStateError(RuntimeError):
    """Steady-state solve failed; carries the achieved residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class DegenerateNullSpaceError(SteadyStateError):
    """The generator has more than one stationary state."""

    def __init__(self, dimension: int):
        super().__init__(
            f"stationary state is not unique: null space dimension {dimension}"
        )
        self.dimension = dimension


def _sup(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> a @ rho @ b under column stacking."""
    return np.kron(b.T, a)


def _bracket_plus_hc(terms) -> np.ndarray:
    """Sum coef * A rho B over terms, plus the Hermitian conjugate images."""
    out = np.zeros((DIM * DIM, DIM * DIM))
    for coef, a, b in terms:
        out += coef * _sup(a, b)
        out += coef * _sup(b.conj().T, a.conj().T)
    return out


def _thermal_bracket(z: np.ndarray, occ: float) -> np.ndarray:
    """Single-mode thermalization bracket (before the rate prefactor).

    (1-n)(zd z rho - z rho zd) + n (z zd rho - zd rho z) + h.c.
    """
    zd = z.conj().T
    return _bracket_plus_hc(
        [
            (1.0 - occ, zd @ z, np.eye(DIM)),
            (-(1.0 - occ), z, zd),
            (occ, z @ zd, np.eye(DIM)),
            (-occ, zd, z),
        ]
    )


def _cross_bracket(occ1: float, occ2: float) -> tuple[np.ndarray, np.ndarray]:
    """Cross-mode bracket coupling populations to the 2<->3 coherence.

    First line exchanges through mode 1's occupation, second through
    mode 2's; both lines plus their Hermitian conjugates.
    """
    eye = np.eye(DIM)
    line1 = _bracket_plus_hc(
        [
            (1.0 - occ1, _Z2D @ _Z1, eye),
            (-(1.0 - occ1), _Z1, _Z2D),
            (occ1, _Z2 @ _Z1D, eye),
            (-occ1, _Z1D, _Z2),
        ]
    )
    line2 = _bracket_plus_hc(
        [
            (1.0 - occ2, _Z1D @ _Z2, eye),
            (-(1.0 - occ2), _Z1, _Z2D),
            (occ2, _Z1 @ _Z2D, eye),
            (-occ2, _Z1D, _Z2),
        ]
    )
    return line1, line2


def build_dissipators(
    basis: EigenBasis, baths: BathParams, params: SystemParams
) -> DissipatorParts:
    """Assemble the four dissipator superoperators (N1, N2, S1, S2).

    N_l thermalizes each dressed mode against reservoir l with the
    angular weights (1 +- cos theta)/2; S_l holds the nonsecular
    cross-mode terms, weighted by (+-1/2) Gamma sin theta.  All four
    enter the equation of motion with a minus sign (see module
    docstring).
    """
    ct, st = basis.cos_theta, basis.sin_theta
    temps = ((baths.t1, baths.mu1), (baths.t2, baths.mu2))
    n_parts = []
    s_parts = []
    for l, (t, mu) in enumerate(temps, start=1):
        occ1 = fermi_occupation(basis.omega_p1, t, mu)
        occ2 = fermi_occupation(basis.omega_p2, t, mu)
        sign = -1.0 if l == 1 else 1.0  # (-1)^l
        weight_m1 = 0.5 * (1.0 + sign * ct)
        weight_m2 = 0.5 * (1.0 - sign * ct)
        n_l = params.gamma1 * weight_m1 * _thermal_bracket(_Z1, occ1)
        n_l = n_l + params.gamma2 * weight_m2 * _thermal_bracket(_Z2, occ2)
        line1, line2 = _cross_bracket(occ1, occ2)
        s_l = -sign * 0.5 * st * (params.gamma1 * line1 + params.gamma2 * line2)
        n_parts.append(n_l)
        s_parts.append(s_l)
    return DissipatorParts(n_parts[0], n_parts[1], s_parts[0], s_parts[1])


@dataclass(frozen=True)
class Liouvillian:
    """Full generator and its per-bath pieces, all 16x16 column-stacked.

    matrix = unitary + bath1 + bath2 with bath_l = -(N_l + S_l); the
    bath pieces are the per-reservoir contributions traced against
    observables for currents.
    """

    matrix: np.ndarray
    unitary: np.ndarray
    bath1: np.ndarray
    bath2: np.ndarray
    hamiltonian: np.ndarray
    basis: EigenBasis


def build_liouvillian(
    basis: EigenBasis, baths: BathParams, params: SystemParams
) -> Liouvillian:
    """Build the full generator d rho/dt = i[rho, H] - sum_l (N_l + S_l)."""
    h = hamiltonian(basis)
    eye = np.eye(DIM)
    unitary = 1j * (_sup(eye, h) - _sup(h, eye))  # i (rho H - H rho)
    parts = build_dissipators(basis, baths, params)
    bath1 = -(parts.n1 + parts.s1).astype(complex)
    bath2 = -(parts.n2 + parts.s2).astype(complex)
    return Liouvillian(
        matrix=unitary + bath1 + bath2,
        unitary=unitary,
        bath1=bath1,
        bath2=bath2,
        hamiltonian=h,
        basis=basis,
    )


def _unvec(v: np.ndarray) -> np.ndarray:
    return v.reshape(DIM, DIM, order="F")


def _finalize(rho: np.ndarray, lv: Liouvillian, residual_tol: float) -> np.ndarray:
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = np.linalg.norm(lv.matrix @ rho.flatten(order="F"))
    if not residual < residual_tol:
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {residual_tol:.1e}",
            residual=residual,
        )
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -1e-9:
        raise SteadyStateError(
            f"steady state not positive semidefinite: min eigenvalue {eigs.min():.3e}"
        )
    return rho


def _null_space_dimension(matrix: np.ndarray) -> int:
    svals = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(svals < 1e-10 * svals[0]))


def steady_state(lv: Liouvillian, residual_tol: float = 1e-10) -> np.ndarray:
    """Unique stationary density matrix of the generator.

    Replaces the first row of L with the trace constraint and solves the
    square system; fast enough for dense sweeps.  Raises
    DegenerateNullSpaceError when the stationary state is not unique
    (e.g. both couplings zero) and SteadyStateError when the solve does
    not meet the residual tolerance.
    """
    a = lv.matrix.copy()
    a[0, :] = _TRACE_ROW
    b = np.zeros(DIM * DIM, dtype=complex)
    b[0] = 1.0
    try:
        v = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        dim = _null_space_dimension(lv.matrix)
        if dim > 1:
            raise DegenerateNullSpaceError(dim) from None
        raise SteadyStateError("steady-state linear solve is singular") from None
    rho = _unvec(v)
    try:
        return _finalize(rho, lv, residual_tol)
    except SteadyStateError as err:
        dim = _null_space_dimension(lv.matrix)
        if dim > 1:
            raise DegenerateNullSpaceError(dim) from None
        raise err


def steady_state_svd(lv: Liouvillian, residual_tol: float = 1e-10) -> np.ndarray:
    """Stationary state via the SVD null vector; independent of the
    row-replacement path, used as the cross-check oracle."""
    _, svals, vh = np.linalg.svd(lv.matrix)
    dim = int(np.sum(svals < 1e-10 * svals[0]))
    if dim > 1:
        raise DegenerateNullSpaceError(dim)
    rho = _unvec(vh[-1, :].conj())
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise SteadyStateError("null vector is traceless; no valid state found")
    return _finalize(rho / tr, lv, residual_tol)


@dataclass(frozen=True)
class NessResult:
    """Steady state plus the objects that produced it."""

    rho: np.ndarray
    liouvillian: Liouvillian
    basis: EigenBasis
    residual: float


def solve_ness(params: SystemParams, baths: BathParams) -> NessResult:
    """Diagonalize, build the generator and solve, in one call."""
    basis = diagonalize(params)
    lv = build_liouvillian(basis, baths, params)
    rho = steady_state(lv)
    residual = float(np.linalg.norm(lv.matrix @ rho.flatten(order="F")))
    return NessResult(rho=rho, liouvillian=lv, basis=basis, residual=residual)


def grand_canonical_state(basis: EigenBasis, t: float, mu: float) -> np.ndarray:
    """Grand-canonical Gibbs state exp(-(H - mu N)/t)/Z of the two modes.

    This is the exact stationary state whenever both reservoirs share
    (t, mu), for any coupling strength.
    """
    energies = np.array(
        [0.0, basis.omega_p1, basis.omega_p2, basis.omega_p1 + basis.omega_p2]
    )
    numbers = np.array([0.0, 1.0, 1.0, 2.0])
    log_w = -(energies - mu * numbers) / t
    w = np.exp(log_w - log_w.max())
    return np.diag(w / w.sum()).astype(complex)
