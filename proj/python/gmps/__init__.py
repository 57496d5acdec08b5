"""Gaussian matrix product states.

Covariance matrices are plain numpy arrays in interleaved ordering
(Q1, P1, Q2, P2, ...), vacuum-normalized so the single-mode vacuum is the
2x2 identity. Channels are passed as their Jamiolkowski CM plus port counts.
"""

from ._core import (
    CriticalStateError,
    apply_channel,
    apply_symplectic,
    build_gmps,
    chain_gate_product,
    channel_compose,
    collapse_epr,
    correlation_length,
    correlations_infinite,
    gamma_hat,
    ground_energy_density,
    ground_state_eval,
    has_gmps_ground_state,
    parent_hamiltonian,
    partial_transpose,
    protocol_round,
    purity,
    random_pure_map,
    rationalize,
    reduce_bond_entanglement,
    schmidt_decompose,
    schur_complement,
    symplectic_form,
    symplectic_from_generator,
    tms_state,
    validate_state,
    williamson,
    xy_decompose,
    __version__,
)

__all__ = [
    "CriticalStateError",
    "apply_channel",
    "apply_symplectic",
    "build_gmps",
    "chain_gate_product",
    "channel_compose",
    "collapse_epr",
    "correlation_length",
    "correlations_infinite",
    "gamma_hat",
    "ground_energy_density",
    "ground_state_eval",
    "has_gmps_ground_state",
    "parent_hamiltonian",
    "partial_transpose",
    "protocol_round",
    "purity",
    "random_pure_map",
    "rationalize",
    "reduce_bond_entanglement",
    "schmidt_decompose",
    "schur_complement",
    "symplectic_form",
    "symplectic_from_generator",
    "tms_state",
    "validate_state",
    "williamson",
    "xy_decompose",
    "__version__",
]
