"""Steady-state transport, correlations and tunneling metrology for a
two-site fermionic junction.

The package solves the Bloch-Redfield master equation of two tunnel-coupled
fermionic sites, each wired to its own thermal reservoir, without the
secular approximation, and evaluates transport (particle/energy currents,
entropy production), quantum correlations (coherence, concurrence, mutual
information, discord) and the quantum Fisher information of the steady
state with respect to the tunneling amplitude.
"""
from .model import (
    BathParams,
    EigenBasis,
    SystemParams,
    diagonalize,
    fermi_occupation,
    occupation_moments,
)
from .liouvillian import (
    DegenerateNullSpaceError,
    Liouvillian,
    NessResult,
    SteadyStateError,
    build_dissipators,
    build_liouvillian,
    grand_canonical_state,
    hamiltonian,
    mode_operators,
    number_operator,
    solve_ness,
    steady_state,
    steady_state_svd,
)
from .observables import (
    CorrelationReport,
    DiscordOptimizationError,
    DiscordResult,
    SpectralDecomp,
    coherence,
    concurrence,
    concurrence_wootters,
    correlation_report,
    discord,
    discord_brute_force,
    linear_entropy,
    mutual_information,
    reduced_states,
    site_basis_state,
    spectral_decompose,
    spectral_reconstruct,
    x_form_deviation,
)
from .metrology import (
    QfiReport,
    QfiStepError,
    RankChangeError,
    default_step,
    fidelity,
    qfi_equilibrium_approx,
    qfi_fidelity_oracle,
    qfi_spectral,
)
from .thermo import (
    ThermoReport,
    energy_current,
    entropy_production_rate,
    epr_leading_order,
    epr_regime_ok,
    ness_leading_order,
    particle_current,
    transport_report,
)
from .sweep import (
    Axis,
    ConfigError,
    SweepResult,
    SweepSpec,
    emit,
    load_config,
    point_from_config,
    run_sweep,
    sweep_spec_from_config,
)
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BathParams",
    "ConfigError",
    "CorrelationReport",
    "DegenerateNullSpaceError",
    "DiscordOptimizationError",
    "DiscordResult",
    "EigenBasis",
    "Liouvillian",
    "NessResult",
    "QfiReport",
    "QfiStepError",
    "RankChangeError",
    "SpectralDecomp",
    "SteadyStateError",
    "SweepResult",
    "SweepSpec",
    "SystemParams",
    "ThermoReport",
    "build_dissipators",
    "build_liouvillian",
    "coherence",
    "concurrence",
    "concurrence_wootters",
    "correlation_report",
    "default_step",
    "diagonalize",
    "discord",
    "discord_brute_force",
    "emit",
    "energy_current",
    "entropy_production_rate",
    "epr_leading_order",
    "epr_regime_ok",
    "fermi_occupation",
    "fidelity",
    "grand_canonical_state",
    "hamiltonian",
    "linear_entropy",
    "load_config",
    "mode_operators",
    "mutual_information",
    "ness_leading_order",
    "number_operator",
    "occupation_moments",
    "particle_current",
    "point_from_config",
    "qfi_equilibrium_approx",
    "qfi_fidelity_oracle",
    "qfi_spectral",
    "reduced_states",
    "run_sweep",
    "run_verification",
    "site_basis_state",
    "solve_ness",
    "spectral_decompose",
    "spectral_reconstruct",
    "steady_state",
    "steady_state_svd",
    "sweep_spec_from_config",
    "transport_report",
    "x_form_deviation",
]
