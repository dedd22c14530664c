"""Dense execution of circuits on density matrices."""

from __future__ import annotations

from ..densmat import GATES, DensityMatrix, partial_trace, postselect_parity, reset_qubit
from ..noise import PauliProbs, apply_noisy_1q, apply_noisy_cnot
from .circuit import Circuit

__all__ = ["DegenerateBranchError", "run_circuit", "NOISELESS"]

NOISELESS = PauliProbs()
_TINY = 1e-300


class DegenerateBranchError(ArithmeticError):
    """A postselected branch has (numerically) zero probability."""


def run_circuit(circuit: Circuit, rho: DensityMatrix, probs: PauliProbs = NOISELESS) -> DensityMatrix:
    """Run ``circuit`` on ``rho``.

    Postselections leave the result unnormalised, with ``trace_weight`` equal
    to the input weight times the product of branch probabilities.  Qubits
    discarded at the end of the circuit are traced out; the remaining qubits
    keep their relative order.
    """
    if rho.n_qubits != circuit.width:
        raise ValueError(f"circuit width {circuit.width} does not match a {rho.n_qubits}-qubit state")
    state = rho.copy()
    for k, ins in enumerate(circuit.instructions):
        op = ins.op
        p = probs if ins.noisy else NOISELESS
        if op == "CNOT":
            apply_noisy_cnot(state, ins.qubits[0], ins.qubits[1], p, inplace=True)
        elif ins.is_gate:
            apply_noisy_1q(state, GATES[op], ins.qubits[0], p, inplace=True)
        elif op == "PREP":
            state = reset_qubit(state, ins.qubits[0])
        elif ins.is_measurement:
            state, prob = postselect_parity(state, ins.qubits, ins.expect, ins.basis, inplace=True)
            if prob < _TINY:
                raise DegenerateBranchError(f"instruction {k} ({ins.to_text()}) has zero probability")
        # DISCARD: the qubit is idle from here on and is traced out below.
    gone = circuit.discarded_at_end()
    if gone:
        state = partial_trace(state, circuit.output_qubits())
    return state
