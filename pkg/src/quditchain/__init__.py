"""Perfect state transfer of qudit and entangled pair states on spin chains.

The package builds the d-level chain Hamiltonian from SU(d) generator
pairs, derives the transfer time, runs stepped unitary or phase-damped
evolutions, and reports fidelity, Bell-class and entanglement diagnostics.
An HTTP service (``quditchain.service``) and a CLI (``quditchain.cli``)
wrap the library for experiments.
"""

__version__ = "0.1.0"

from .engine import (
    PSTNotFoundError,
    StepRecord,
    TransferConfig,
    TransferTrace,
    bell_corrected_fidelity,
    entanglement_entropy,
    fidelity_pure,
    fidelity_to_pure,
    find_pst_time,
    run_noiseless,
    run_noisy,
    support_pattern,
    transfer_probe_fidelity,
)
from .generators import GeneratorSet, beta, eta, generator_set, projector, theta
from .hamiltonian import (
    ChainHamiltonian,
    ChainSpec,
    build_hamiltonian,
    default_coupling,
    embed_pair,
    embed_single,
    mirror_permutation,
    symmetry_commutator_norm,
    two_site_term,
)
from .linalg import (
    DEFAULT_DIM_CAP,
    DensityMatrix,
    DimensionError,
    PureState,
    kron,
    kron_all,
    mat_exp_hermitian,
    partial_trace,
    reduced_from_pure,
    vn_entropy,
)
from .noise import (
    KrausChannel,
    WeylSpec,
    apply_channel,
    apply_channel_at,
    binomial_weyl_spec,
    phase_damping,
    phase_damping_weights,
    process_matrix,
    weyl_channel,
)
from .states import (
    BellLabel,
    GateSet,
    basis_state,
    bell_via_circuit,
    embed_in_chain,
    gate_set,
    generalized_bell,
)

__all__ = [
    "__version__",
    "BellLabel",
    "ChainHamiltonian",
    "ChainSpec",
    "DEFAULT_DIM_CAP",
    "DensityMatrix",
    "DimensionError",
    "GateSet",
    "GeneratorSet",
    "KrausChannel",
    "PSTNotFoundError",
    "PureState",
    "StepRecord",
    "TransferConfig",
    "TransferTrace",
    "WeylSpec",
    "apply_channel",
    "apply_channel_at",
    "basis_state",
    "bell_corrected_fidelity",
    "bell_via_circuit",
    "beta",
    "binomial_weyl_spec",
    "build_hamiltonian",
    "default_coupling",
    "embed_in_chain",
    "embed_pair",
    "embed_single",
    "entanglement_entropy",
    "eta",
    "fidelity_pure",
    "fidelity_to_pure",
    "find_pst_time",
    "gate_set",
    "generalized_bell",
    "generator_set",
    "kron",
    "kron_all",
    "mat_exp_hermitian",
    "mirror_permutation",
    "partial_trace",
    "phase_damping",
    "phase_damping_weights",
    "process_matrix",
    "projector",
    "reduced_from_pure",
    "run_noiseless",
    "run_noisy",
    "support_pattern",
    "symmetry_commutator_norm",
    "theta",
    "transfer_probe_fidelity",
    "two_site_term",
    "vn_entropy",
    "weyl_channel",
]
