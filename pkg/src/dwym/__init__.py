"""Covariant-Hamiltonian lattice dynamics for complex Klein-Gordon matter
coupled to U(1) and SU(N) gauge fields, with tools that numerically verify
the gauge symmetry of the Hamiltonian and the conservation laws it implies.
"""

from .lattice import LatticeSpec, ModelParams, default_spec
from .minkowski import Metric, lower_index, raise_index
from .linalg import dagger, herm_part, antiherm_part, is_hermitian, is_unitary, \
    is_traceless, mat_exp_i, mat_exp_i_dexp, sun_basis
from .stencils import central_diff, grad
from .state import GaugeFieldState, new_state, seed_plane_wave, random_state, \
    smooth_random_state, smooth_state_coeffs, triangle_pairs
from .snapshot import SnapshotError, snapshot_read, snapshot_write
from .hamiltonians import MatterGradients, eval_free, eval_kgm, eval_ym, \
    eval_density, grad_matter, legendre_lagrangian, slice_sum
from .gauge import FormInvarianceResult, GaugeError, SUNGaugeFunction, \
    U1GaugeFunction, apply_gauge, apply_infinitesimal, apply_sun, apply_u1, \
    check_form_invariance, delta_h_explicit, explicit_change
from .noether import DecompositionResult, divergence, double_divergence, \
    maxwell_residual, onshell_decomposition, sun_current, sun_gauge_current, \
    total_charge, u1_current, u1_matter_current
from .dynamics import ConfigError, DiagnosticsRecord, EvolutionConfig, \
    GaussIncompatibleError, NumericalError, ReduceReport, canonical_energy_density, \
    charge_balanced_initial, cauchy_state, covariant_momenta, evolve, evolve_u1, \
    field_strength, free_wave_initial, reduce_to_u1, reversed_cauchy, solve_gauss, \
    step, step_cauchy
from .convergence import improvement, measured_order

__version__ = "0.1.0"
