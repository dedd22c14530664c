"""Experiment drivers for the dense backend.

Every experiment reports two fidelities.  ``f7`` compares the full 7-qubit
block with its ideal counterpart.  ``f1`` decodes noiselessly, keeps qubit 1
and compares it with the ideal logical state.  For gate experiments the
reference is the noisily encoded block with an ideal gate, for both
measures.  QEC experiments compare against the ideal codeword.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from ..densmat import DensityMatrix, StatePrep, fidelity, partial_trace, pure_state, tensor, to_density, zero_state
from ..noise import PauliProbs
from .circuit import Circuit
from .library import LogicalGate, logical_gate_circuit, steane_decoder, steane_encoder
from .qec import ft_qec_round, perfect_qec, perfect_syndrome_postselect
from .simulate import NOISELESS, run_circuit

__all__ = ["ExperimentId", "ExperimentResult", "UnknownExperimentError", "run_experiment", "QEC_MODES"]

KINDS = ("encode", "gate", "perfect-qec", "noisy-qec")
QEC_MODES = ("postselect", "correct")
_KEY_RE = re.compile(r"^(encode|gate|perfect-qec|noisy-qec)(?:-(2))?(?:-([hxp]))?$")


class UnknownExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentId:
    kind: str
    gate: LogicalGate | None = None
    rounds: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnknownExperimentError(f"unknown experiment {self.kind!r}")
        if self.gate is not None:
            object.__setattr__(self, "gate", LogicalGate.parse(self.gate))
        if self.kind == "gate" and self.gate is None:
            raise UnknownExperimentError("gate experiment needs a gate")
        if self.kind == "encode" and self.gate is not None:
            raise UnknownExperimentError("encode experiment takes no gate")
        if self.rounds not in (1, 2) or (self.rounds != 1 and self.kind != "noisy-qec"):
            raise UnknownExperimentError("rounds must be 1 or 2 and only applies to noisy-qec")

    @property
    def key(self) -> str:
        parts = [self.kind]
        if self.rounds == 2:
            parts.append("2")
        if self.gate is not None:
            parts.append(self.gate.value.lower())
        return "-".join(parts)

    @classmethod
    def from_key(cls, key: str) -> "ExperimentId":
        m = _KEY_RE.match(key.strip().lower())
        if not m:
            raise UnknownExperimentError(f"unknown experiment {key!r}")
        kind, two, gate = m.groups()
        return cls(kind, LogicalGate.parse(gate) if gate else None, 2 if two else 1)

    def __str__(self) -> str:
        return self.key


class ExperimentResult(NamedTuple):
    f7: float
    f1: float
    postselect_prob: float


def _decode_qubit1(rho7: DensityMatrix, decoder: Circuit) -> DensityMatrix:
    return partial_trace(run_circuit(decoder, rho7.normalized()), [1])


def run_experiment(
    exp: ExperimentId | str,
    prep: StatePrep,
    probs: PauliProbs,
    *,
    qec_mode: str = "postselect",
    encoder: Circuit | str | Path | None = None,
    shor_path: str | Path | None = None,
) -> ExperimentResult:
    """Run one experiment on the dense backend.

    ``qec_mode`` selects how perfect QEC is modelled: ``"postselect"`` keeps
    the trivial-syndrome branch and renormalises, ``"correct"`` applies the
    full syndrome-conditioned recovery map.
    """
    if isinstance(exp, str):
        exp = ExperimentId.from_key(exp)
    if qec_mode not in QEC_MODES:
        raise ValueError(f"qec_mode must be one of {QEC_MODES}")
    enc = encoder if isinstance(encoder, Circuit) else steane_encoder(encoder)
    dec = steane_decoder(enc)
    psi = to_density(pure_state(prep))
    rho_in = tensor(psi, zero_state(6))
    ideal7 = run_circuit(enc, rho_in)
    noisy7 = run_circuit(enc, rho_in, probs)

    if exp.kind == "encode":
        return ExperimentResult(fidelity(noisy7, ideal7), fidelity(_decode_qubit1(noisy7, dec), psi), 1.0)

    gate = logical_gate_circuit(exp.gate) if exp.gate is not None else None
    if exp.kind == "gate":
        ref = run_circuit(gate, noisy7, NOISELESS)
        out = run_circuit(gate, noisy7, probs)
        f1 = fidelity(_decode_qubit1(out, dec), _decode_qubit1(ref, dec))
        return ExperimentResult(fidelity(out, ref), f1, 1.0)

    if gate is not None:
        ideal7 = run_circuit(gate, ideal7)
        noisy7 = run_circuit(gate, noisy7, probs)
    ideal1 = _decode_qubit1(ideal7, dec)

    if exp.kind == "perfect-qec":
        if qec_mode == "postselect":
            state, prob = perfect_syndrome_postselect(noisy7)
            state = state.normalized()
        else:
            state, prob = perfect_qec(noisy7), 1.0
    else:
        state, prob = noisy7, 1.0
        for _ in range(exp.rounds):
            outcome = ft_qec_round(state, probs, shor_path=shor_path)
            state, prob = outcome.state, prob * outcome.postselect_prob
    return ExperimentResult(fidelity(state, ideal7), fidelity(_decode_qubit1(state, dec), ideal1), prob)
