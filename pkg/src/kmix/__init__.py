"""Statevector simulation and experiment harness for constraint-preserving
XY mixers in discretized adiabatic evolution."""

from .engine import EvolutionMode, Schedule, evolve, schedule_value, step_angles, success_probability
from .mixers import (
    Block,
    MixerKind,
    MixerSpec,
    build_mixer,
    dicke_state,
    exact_mixer_step,
    full_xy_spec,
    initial_state,
    ring_degree_table,
    ring_dicke_residual,
    ring_edges,
    ring_xy_spec,
    trotter_mixer_step,
    x_spec,
)
from .pauli import (
    DiagonalHamiltonian,
    IsingModel,
    PauliString,
    PauliSum,
    commutator_sum,
    evaluate,
    ising_to_diagonal,
    norm_of_commutator,
    pauli_commutator,
    pauli_string,
    pauli_sum,
    paulis_commute,
)
from .problems import (
    EncodedProblem,
    MCFPInstance,
    MCPSInstance,
    PortfolioInstance,
    brute_force_optimum,
    encode_mcfp,
    encode_mcps,
    encode_portfolio,
    enumerate_simple_paths,
    generate_mcfp,
    generate_mcps,
    generate_portfolio,
    partition_to_mcfp,
)
from .statevector import (
    StateVector,
    SubspaceBasis,
    apply_cx,
    apply_diagonal,
    apply_rx,
    apply_ry,
    apply_xx,
    apply_yy,
    basis_state,
    blocked_basis,
    expm_on_subspace,
    hamming_mass,
    k_hot_basis,
    plus_state,
    probability_of_set,
)
from .trotter import census, empirical_step_error, error_scaling_exponent, first_order_bound

__version__ = "0.1.0"
