"""Pulse-level synthesis and verification of exchange-coupled spin-qubit
NOT, CNOT, CCNOT and CCCNOT gates."""

from .config import (
    GAMMA_ELECTRON,
    PhysicalConfig,
    resolve_config,
    resonance_field,
)
from .gates import (
    CCCNOT_SEQUENCE,
    CCNOT_SEQUENCE,
    GateSpec,
    audit_components,
    build_gate,
    canonical_toffoli,
    cnot_2q,
    compose_ccnot,
    compose_cccnot,
    component_program,
    controlled_x_power,
    controlled_z_2q,
    hadamard_like,
    ideal_component,
    not_gate_1q,
    program_matrix,
    pulse_component,
    u_phi,
    x_power,
)
from .hamiltonians import lab_hamiltonian, rotating_hamiltonian
from .operators import embed_pair_zz, embed_single, pauli, spin
from .oracle import (
    IntegrationSettings,
    analytic_rotating,
    check_m_constancy,
    cross_validate,
    integrate_lab,
)
from .tensor import (
    FidelityReport,
    basis_state,
    expm_pauli,
    kron,
    matrix_from_json,
    matrix_to_json,
    phase_fidelity,
)
from .timing import (
    ConstraintKind,
    EmptyConstraintsError,
    GateSchedule,
    IncommensurateError,
    PulseProgram,
    PulseSegment,
    ScheduleInfeasibleError,
    TimingConstraint,
    TimingSolution,
    TimingWitness,
    gate_timing_table,
    invert_for_constants,
    solve_timing,
)

__all__ = [
    "GAMMA_ELECTRON",
    "PhysicalConfig",
    "resolve_config",
    "resonance_field",
    "CCCNOT_SEQUENCE",
    "CCNOT_SEQUENCE",
    "GateSpec",
    "audit_components",
    "build_gate",
    "canonical_toffoli",
    "cnot_2q",
    "compose_ccnot",
    "compose_cccnot",
    "component_program",
    "controlled_x_power",
    "controlled_z_2q",
    "hadamard_like",
    "ideal_component",
    "not_gate_1q",
    "program_matrix",
    "pulse_component",
    "u_phi",
    "x_power",
    "lab_hamiltonian",
    "rotating_hamiltonian",
    "embed_pair_zz",
    "embed_single",
    "pauli",
    "spin",
    "IntegrationSettings",
    "analytic_rotating",
    "check_m_constancy",
    "cross_validate",
    "integrate_lab",
    "FidelityReport",
    "basis_state",
    "expm_pauli",
    "kron",
    "matrix_from_json",
    "matrix_to_json",
    "phase_fidelity",
    "ConstraintKind",
    "EmptyConstraintsError",
    "GateSchedule",
    "IncommensurateError",
    "PulseProgram",
    "PulseSegment",
    "ScheduleInfeasibleError",
    "TimingConstraint",
    "TimingSolution",
    "TimingWitness",
    "gate_timing_table",
    "invert_for_constants",
    "solve_timing",
]

__version__ = "0.1.0"
