"""Littlewood-Paley/Besov analysis on the periodic torus, with a
pseudo-spectral Navier-Stokes solver and blow-up-rate diagnostics."""

from .spectral import (
    GridSpec,
    SpectralField,
    forward_transform,
    inverse_transform,
    lp_norm,
    inner_product,
    spectral_inner_product,
    apply_multiplier,
    inverse_laplacian,
    leray_project,
    dilate,
)
from .cutoffs import (
    CutoffProfile,
    build_cutoffs,
    BandRange,
    DyadicFilterBank,
    verify_bernstein,
)
from .besov import (
    BesovParams,
    besov_norm,
    sobolev_norm,
    sobolev_envelope,
    verify_embedding,
    verify_lebesgue_comparison,
    verify_interpolation_holder,
    verify_interpolation_geometric,
    verify_convergence_bound,
)
from .bony import (
    pointwise_product,
    paraproduct,
    remainder,
    BonyPieces,
    bony_decomposition,
    monitor_paraproduct_estimates,
    monitor_remainder_estimates,
)
from .commutator import (
    advective_derivative,
    commutator,
    CommutatorPieces,
    decompose_commutator,
    monitor_commutator_estimates,
    verify_commutator_kernel_bound,
)
from .solver import (
    SolverState,
    InstabilityAbort,
    nonlinear_term,
    compute_pressure,
    step,
    integrate,
    vorticity_from_velocity,
    velocity_from_vorticity,
    vorticity_equation_residual,
)
from .diagnostics import (
    IndexSelection,
    select_indices,
    exponent_identity_check,
    energy_budget,
    synthetic_blowup_family,
    fit_rate,
    ode_lower_bound,
    verify_ode_lemma,
    qualitative_blowup_monitor,
)
from .snapshots import write_snapshot, read_snapshot
from .config import ExperimentConfig, parse_config, serialize_config, ConfigError

__version__ = "0.1.0"
