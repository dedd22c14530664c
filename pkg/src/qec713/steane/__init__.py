"""Steane [7,1,3] circuits, error correction and experiment drivers."""

from .circuit import (
    Circuit,
    CircuitError,
    CircuitParseError,
    Instruction,
    parse_circuit,
    serialize_circuit,
)
from .experiments import ExperimentId, ExperimentResult, UnknownExperimentError, run_experiment
from .library import (
    EXTRACTION_ORDER,
    LOGICAL_X_SUPPORT,
    LOGICAL_Z_SUPPORT,
    STABILIZER_SUPPORTS,
    LogicalGate,
    extraction_circuit,
    load_circuit,
    logical_gate_circuit,
    qec_round_circuit,
    shor_state_prep,
    steane_decoder,
    steane_encoder,
    syndrome_template,
)
from .qec import SimOutcome, ft_qec_round, hamming_position, perfect_qec, perfect_syndrome_postselect, prepare_ancilla
from .simulate import DegenerateBranchError, run_circuit

__all__ = [
    "Circuit",
    "CircuitError",
    "CircuitParseError",
    "Instruction",
    "parse_circuit",
    "serialize_circuit",
    "ExperimentId",
    "ExperimentResult",
    "UnknownExperimentError",
    "run_experiment",
    "EXTRACTION_ORDER",
    "LOGICAL_X_SUPPORT",
    "LOGICAL_Z_SUPPORT",
    "STABILIZER_SUPPORTS",
    "LogicalGate",
    "extraction_circuit",
    "load_circuit",
    "logical_gate_circuit",
    "qec_round_circuit",
    "shor_state_prep",
    "steane_decoder",
    "steane_encoder",
    "syndrome_template",
    "SimOutcome",
    "ft_qec_round",
    "hamming_position",
    "perfect_qec",
    "perfect_syndrome_postselect",
    "prepare_ancilla",
    "DegenerateBranchError",
    "run_circuit",
]
