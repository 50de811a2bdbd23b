"""State-level quantities for the two-mode junction.

All functions take 4x4 density matrices in the mode occupation basis
{|00>, |10>, |01>, |11>}.  Subsystem A is mode 1, subsystem B is mode 2;
correlation measures are evaluated in this (energy) basis, where the
steady state is X-shaped with a single coherence between the two singly
occupied states.  ``site_basis_state`` rotates a state back to the local
site basis for questions about the physical site-site entanglement.

Entropies are in bits (log base 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .model import EigenBasis

__all__ = [
    "SpectralDecomp",
    "CorrelationReport",
    "DiscordResult",
    "DiscordOptimizationError",
    "spectral_decompose",
    "spectral_reconstruct",
    "coherence",
    "linear_entropy",
    "concurrence",
    "concurrence_wootters",
    "mutual_information",
    "reduced_states",
    "discord",
    "discord_brute_force",
    "correlation_report",
    "site_basis_state",
    "x_form_deviation",
]

# Index pairs allowed to be nonzero in the X states this model produces
# (diagonal plus the 2<->3 coherence; the 1<->4 pair stays empty).
_X_ALLOWED = {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)}

# Mode-basis {|00>,|10>,|01>,|11>} vs kron order {|00>,|01>,|10>,|11>}.
_PERM = np.array([0, 2, 1, 3])

_EIG_FLOOR = -1e-9  # most negative eigenvalue accepted as roundoff


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigendata of an X state with empty 1<->4 coherence.

    p1 and p4 weight |00> and |11>; p2 >= p3 weight the two dressed
    vectors of the singly occupied block, parameterized by the mixing
    angle alpha in [0, pi] and the coherence phase phi in (-pi, pi].
    """

    p1: float
    p2: float
    p3: float
    p4: float
    alpha: float
    phi: float


@dataclass(frozen=True)
class CorrelationReport:
    """Scalar correlation measures for one state (entropies in bits)."""

    coherence: float
    linear_entropy: float
    concurrence: float
    qmi: float
    classical_corr: float
    discord: float


@dataclass(frozen=True)
class DiscordResult:
    """Outcome of the one-sided measurement optimization on subsystem B."""

    classical_corr: float
    discord: float
    qmi: float
    theta: float
    phi: float


class DiscordOptimizationError(RuntimeError):
    """Measurement optimizer failed; carries the best value found."""

    def __init__(self, message: str, best_value: float):
        super().__init__(message)
        self.best_value = best_value


def x_form_deviation(rho: np.ndarray) -> float:
    """Largest magnitude among entries an X state must leave empty."""
    dev = 0.0
    for i in range(4):
        for j in range(4):
            if (i, j) not in _X_ALLOWED:
                dev = max(dev, abs(rho[i, j]))
    return dev


def spectral_decompose(rho: np.ndarray, xtol: float = 1e-10) -> SpectralDecomp:
    """Eigenvalues and mixing angles of an X state.

    The singly occupied block diagonalizes as

        p_{2,3} = (rho22 + rho33)/2 +- sqrt((rho22 - rho33)^2/4 + |rho23|^2)

    with alpha = atan2(2 |rho23|, rho22 - rho33) and phi = arg(rho23)
    (phi = 0 when the coherence vanishes and the phase is undefined).
    """
    dev = x_form_deviation(rho)
    if dev > xtol:
        raise ValueError(
            f"state is not X-form: off-pattern entry of magnitude {dev:.3e}"
        )
    p1 = rho[0, 0].real
    p4 = rho[3, 3].real
    d22 = rho[1, 1].real
    d33 = rho[2, 2].real
    coh = rho[1, 2]
    mid = 0.5 * (d22 + d33)
    r = math.hypot(0.5 * (d22 - d33), abs(coh))
    alpha = math.atan2(2.0 * abs(coh), d22 - d33)
    phi = math.atan2(coh.imag, coh.real) if abs(coh) > 0.0 else 0.0
    return SpectralDecomp(p1, mid + r, mid - r, p4, alpha, phi)


def spectral_reconstruct(decomp: SpectralDecomp) -> np.ndarray:
    """Rebuild the state from its decomposition (inverse of the above)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = decomp.p1
    rho[3, 3] = decomp.p4
    c = math.cos(0.5 * decomp.alpha)
    s = math.sin(0.5 * decomp.alpha)
    ph = complex(math.cos(decomp.phi), math.sin(decomp.phi))
    v2 = np.array([c * ph, s])
    v3 = np.array([s * ph, -c])
    block = decomp.p2 * np.outer(v2, v2.conj()) + decomp.p3 * np.outer(v3, v3.conj())
    rho[1:3, 1:3] = block
    return rho


def coherence(rho: np.ndarray) -> float:
    """Magnitude of the coherence between the singly occupied states."""
    return float(abs(rho[1, 2]))


def linear_entropy(rho: np.ndarray) -> float:
    """Normalized linear entropy (4/3)(1 - Tr rho^2): 0 pure, 1 maximally mixed."""
    purity = float(np.vdot(rho, rho).real)
    return (4.0 / 3.0) * (1.0 - purity)


def concurrence(rho: np.ndarray, xtol: float = 1e-10) -> float:
    """Two-qubit concurrence.

    X states use the closed form
        E = 2 max(0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33));
    anything else falls through to the general spin-flip formula.
    """
    off = max(
        abs(rho[0, 1]), abs(rho[0, 2]), abs(rho[1, 3]), abs(rho[2, 3])
    )
    if off > xtol:
        return concurrence_wootters(rho)
    inner = abs(rho[1, 2]) - math.sqrt(max(rho[0, 0].real, 0.0) * max(rho[3, 3].real, 0.0))
    outer = abs(rho[0, 3]) - math.sqrt(max(rho[1, 1].real, 0.0) * max(rho[2, 2].real, 0.0))
    return 2.0 * max(0.0, inner, outer)


_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)[np.ix_(_PERM, _PERM)].real


def concurrence_wootters(rho: np.ndarray) -> float:
    """General spin-flip concurrence max(0, l1 - l2 - l3 - l4)."""
    tilde = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    # abs() guards the sqrt against tiny negative roundoff eigenvalues
    lam = np.sqrt(np.abs(np.linalg.eigvals(rho @ tilde).real))
    lam.sort()
    return float(max(0.0, lam[3] - lam[2] - lam[1] - lam[0]))


def _entropy_bits(mat: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(mat)
    if eigs.min() < _EIG_FLOOR:
        raise ValueError(f"matrix has eigenvalue {eigs.min():.3e}; not a state")
    eigs = np.clip(eigs, 0.0, None)
    nz = eigs[eigs > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def reduced_states(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced 2x2 states of subsystem A (mode 1) and B (mode 2)."""
    t = rho[np.ix_(_PERM, _PERM)].reshape(2, 2, 2, 2)
    rho_a = np.einsum("abcb->ac", t)
    rho_b = np.einsum("abad->bd", t)
    return rho_a, rho_b


def mutual_information(rho: np.ndarray) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) in bits."""
    rho_a, rho_b = reduced_states(rho)
    return _entropy_bits(rho_a) + _entropy_bits(rho_b) - _entropy_bits(rho)


def _measurement_pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal measurement vectors along the Bloch direction (theta, phi)."""
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    ph = complex(math.cos(phi), math.sin(phi))
    return np.array([c, ph * s]), np.array([s, -ph * c])


def _conditional_entropy(t: np.ndarray, theta: float, phi: float) -> float:
    """Average post-measurement entropy of A for a projective measurement
    on B along (theta, phi); t is the (a, b, a', b') tensor of rho."""
    total = 0.0
    for m in _measurement_pair(theta, phi):
        w = np.einsum("b,abcd,d->ac", m.conj(), t, m)
        p = w.trace().real
        if p > 1e-15:
            total += p * _entropy_bits(w / p)
    return total


def discord(
    rho: np.ndarray,
    grid: int = 40,
    seed: int | None = None,
    refine_tol: float = 1e-9,
) -> DiscordResult:
    """Classical correlation and quantum discord via one-sided measurement.

    The classical correlation is S(A) minus the smallest average
    conditional entropy over projective measurements on B; the discord is
    the mutual information minus that.  A coarse grid over the Bloch
    sphere (optionally jittered by ``seed``) localizes the minimum, then
    a Nelder-Mead refinement polishes it.
    """
    t = rho[np.ix_(_PERM, _PERM)].reshape(2, 2, 2, 2)
    rho_a, rho_b = reduced_states(rho)
    s_a = _entropy_bits(rho_a)
    qmi = s_a + _entropy_bits(rho_b) - _entropy_bits(rho)

    d_theta = math.pi / grid
    d_phi = 2.0 * math.pi / grid
    off_theta = 0.5
    off_phi = 0.5
    if seed is not None:
        rng = np.random.default_rng(seed)
        off_theta, off_phi = rng.uniform(0.05, 0.95, size=2)
    best_val = math.inf
    best_angles = (0.0, 0.0)
    for i in range(grid + 1):
        theta = min((i + off_theta) * d_theta, math.pi)
        for j in range(grid):
            phi = (j + off_phi) * d_phi
            val = _conditional_entropy(t, theta, phi)
            if val < best_val:
                best_val = val
                best_angles = (theta, phi)

    result = minimize(
        lambda x: _conditional_entropy(t, x[0], x[1]),
        x0=np.array(best_angles),
        method="Nelder-Mead",
        options={"xatol": refine_tol, "fatol": refine_tol * 1e-3, "maxiter": 400},
    )
    if not result.success and result.fun > best_val + 1e-12:
        raise DiscordOptimizationError(
            f"measurement optimizer did not converge: {result.message}; "
            f"grid best {best_val:.12f}",
            best_value=min(best_val, float(result.fun)),
        )
    cond = min(best_val, float(result.fun))
    classical = s_a - cond
    return DiscordResult(
        classical_corr=classical,
        discord=qmi - classical,
        qmi=qmi,
        theta=float(result.x[0]) if result.fun <= best_val else best_angles[0],
        phi=float(result.x[1]) if result.fun <= best_val else best_angles[1],
    )


def discord_brute_force(rho: np.ndarray, resolution: int = 400) -> DiscordResult:
    """Exhaustive measurement-angle grid; the oracle for the optimizer.

    Evaluates the conditional entropy on a full (theta, phi) grid with
    closed-form 2x2 eigenvalues, vectorized over the whole grid.  The
    returned angles are the best grid cell.
    """
    t = rho[np.ix_(_PERM, _PERM)].reshape(2, 2, 2, 2)
    rho_a, rho_b = reduced_states(rho)
    s_a = _entropy_bits(rho_a)
    qmi = s_a + _entropy_bits(rho_b) - _entropy_bits(rho)

    thetas = np.linspace(0.0, math.pi, resolution)
    phis = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    c = np.cos(0.5 * tt).ravel()
    s = np.sin(0.5 * tt).ravel()
    ph = np.exp(1j * pp.ravel())
    cond = np.zeros(c.shape)
    for m in (
        np.stack([c, ph * s], axis=1),
        np.stack([s, -ph * c], axis=1),
    ):
        w = np.einsum("nb,abcd,nd->nac", m.conj(), t, m)
        p = np.einsum("naa->n", w).real
        diff = w[:, 0, 0].real - w[:, 1, 1].real
        split = np.sqrt(diff * diff + 4.0 * np.abs(w[:, 0, 1]) ** 2)
        lam = np.stack([0.5 * (p + split), 0.5 * (p - split)], axis=1)
        lam = np.clip(lam, 0.0, None)
        # entropy of the normalized conditional state, weighted by p:
        # sum over outcomes of -lam log2(lam/p)
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(lam > 0.0, np.log2(np.where(lam > 0.0, lam, 1.0)), 0.0)
        plog = np.where(p[:, None] > 0.0, np.log2(np.where(p > 0.0, p, 1.0))[:, None], 0.0)
        cond += -(lam * (logs - plog)).sum(axis=1)
    k = int(np.argmin(cond))
    classical = s_a - float(cond[k])
    return DiscordResult(
        classical_corr=classical,
        discord=qmi - classical,
        qmi=qmi,
        theta=float(tt.ravel()[k]),
        phi=float(pp.ravel()[k]),
    )


def correlation_report(
    rho: np.ndarray, grid: int = 40, seed: int | None = None
) -> CorrelationReport:
    """All correlation scalars for one state, discord included."""
    d = discord(rho, grid=grid, seed=seed)
    return CorrelationReport(
        coherence=coherence(rho),
        linear_entropy=linear_entropy(rho),
        concurrence=concurrence(rho),
        qmi=d.qmi,
        classical_corr=d.classical_corr,
        discord=d.discord,
    )


def site_basis_state(rho: np.ndarray, basis: EigenBasis) -> np.ndarray:
    """Rotate a mode-basis state to the local site basis.

    Only the singly occupied block changes; the empty and doubly
    occupied sectors are invariant under the single-particle rotation
    (the doubly occupied ket picks up the determinant sign, invisible
    for the X states this model produces).
    """
    half_c = math.sqrt(max(0.0, 0.5 * (1.0 + basis.cos_theta)))
    if half_c > 1e-8:
        half_s = 0.5 * basis.sin_theta / half_c
    else:
        half_s, half_c = 1.0, 0.0
    u = np.zeros((4, 4))
    u[0, 0] = 1.0
    u[1, 1] = half_s
    u[2, 1] = half_c
    u[1, 2] = half_c
    u[2, 2] = -half_s
    u[3, 3] = -1.0
    return u.conj().T @ rho @ u
