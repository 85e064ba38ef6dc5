"""Classically simulated quantum-circuit matrix product states for chemistry."""

from .blocks import (
    AnsatzSpec,
    BlockSpec,
    build_block_unitary,
    estimate_elementary_gates,
    gate_count,
    parameter_count,
)
from .errors import (
    ConvergenceError,
    DiagnosticsError,
    FcidumpError,
    QcmpsError,
    ValidationError,
)
from .fcidump import MolecularIntegrals, SpinOrbitalView, parse_fcidump, read_fcidump, write_fcidump
from .mps import QcmpsState, expectation, to_statevector
from .orbitals import (
    EntanglementReport,
    exponentiate_kappa,
    interaction_matrix,
    one_orbital_rdm,
    rotate_integrals,
    two_orbital_rdm,
)
from .pauli import (
    PauliPolynomial,
    PauliTerm,
    build_qubit_hamiltonian,
    format_polynomial,
    jordan_wigner,
    number_operator,
    parse_polynomial,
    sz_operator,
    total_spin_operator,
)
from .reference import expectation_statevector, fci_ground_state, ground_state, hf_energy
from .vqe import (
    KCAL_PER_HARTREE,
    QcmpsVqe,
    VqeConfig,
    VqeResult,
    optimize,
    scan_layers,
    select_layer_count,
)

__all__ = [
    "AnsatzSpec",
    "BlockSpec",
    "ConvergenceError",
    "DiagnosticsError",
    "EntanglementReport",
    "FcidumpError",
    "KCAL_PER_HARTREE",
    "MolecularIntegrals",
    "PauliPolynomial",
    "PauliTerm",
    "QcmpsError",
    "QcmpsState",
    "QcmpsVqe",
    "SpinOrbitalView",
    "ValidationError",
    "VqeConfig",
    "VqeResult",
    "build_block_unitary",
    "build_qubit_hamiltonian",
    "estimate_elementary_gates",
    "expectation",
    "expectation_statevector",
    "exponentiate_kappa",
    "fci_ground_state",
    "format_polynomial",
    "gate_count",
    "ground_state",
    "hf_energy",
    "interaction_matrix",
    "jordan_wigner",
    "number_operator",
    "one_orbital_rdm",
    "optimize",
    "parameter_count",
    "parse_fcidump",
    "parse_polynomial",
    "read_fcidump",
    "rotate_integrals",
    "scan_layers",
    "select_layer_count",
    "sz_operator",
    "to_statevector",
    "total_spin_operator",
    "two_orbital_rdm",
    "write_fcidump",
]

__version__ = "0.1.0"
