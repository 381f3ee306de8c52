"""Bell-state creation and detection with a pumped-crystal conditional-phase switch.

Two-photon polarization states in superposition with the vacuum pass through
half-wave plates and a first-order switch model before a polarizing beam
splitter coincidence readout. The switch model itself is checked against
exact propagation in a truncated Fock space.
"""

from .state import (
    EXACT_TOL,
    BellLabel,
    PairState,
    RectLabel,
    assert_close,
    bell_basis_matrix,
    bell_components,
    bell_vector,
    make_downconversion_state,
    max_deviation,
    pair_fidelity,
    rect_vector,
)
from .elements import (
    CrystalRecord,
    Modes,
    SwitchSettings,
    TwoModeGate,
    apply_gate,
    apply_switch,
    hadamard_gate,
    norm_change,
    required_injection_for_pi,
    waveplate_gate,
)
from .circuits import (
    Circuit,
    Device,
    MappingReport,
    bell_analyzer,
    bell_creator,
    mapping_report,
    qubit_circuit_reference,
    run_circuit,
    trace_circuit,
)
from .detection import (
    Outcome,
    OutcomeDistribution,
    ShotRecord,
    identify_bell,
    outcome_distribution,
    sample_shots,
)
from .oracle import (
    FockBasis,
    FockState,
    PumpedHamiltonian,
    TruncationError,
    embed,
    error_scaling_study,
    propagate_exact,
    validate_switch,
)

__version__ = "0.1.0"

__all__ = [
    "EXACT_TOL",
    "BellLabel",
    "PairState",
    "RectLabel",
    "assert_close",
    "bell_basis_matrix",
    "bell_components",
    "bell_vector",
    "make_downconversion_state",
    "max_deviation",
    "pair_fidelity",
    "rect_vector",
    "CrystalRecord",
    "Modes",
    "SwitchSettings",
    "TwoModeGate",
    "apply_gate",
    "apply_switch",
    "hadamard_gate",
    "norm_change",
    "required_injection_for_pi",
    "waveplate_gate",
    "Circuit",
    "Device",
    "MappingReport",
    "bell_analyzer",
    "bell_creator",
    "mapping_report",
    "qubit_circuit_reference",
    "run_circuit",
    "trace_circuit",
    "Outcome",
    "OutcomeDistribution",
    "ShotRecord",
    "identify_bell",
    "outcome_distribution",
    "sample_shots",
    "FockBasis",
    "FockState",
    "PumpedHamiltonian",
    "TruncationError",
    "embed",
    "error_scaling_study",
    "propagate_exact",
    "validate_switch",
]
