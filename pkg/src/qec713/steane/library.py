"""The [7,1,3] circuit library.

Circuits are loaded from the ``.sqc`` files shipped in ``steane/data`` so an
alternative encoder or ancilla preparation can be swapped in by path.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .circuit import Circuit, Instruction, parse_circuit

__all__ = [
    "STABILIZER_SUPPORTS",
    "LOGICAL_X_SUPPORT",
    "LOGICAL_Z_SUPPORT",
    "EXTRACTION_ORDER",
    "LogicalGate",
    "load_circuit",
    "steane_encoder",
    "steane_decoder",
    "logical_gate_circuit",
    "shor_state_prep",
    "syndrome_template",
    "extraction_circuit",
    "qec_round_circuit",
    "DATA_QUBITS",
    "ANCILLA_QUBITS",
    "VERIFY_QUBIT",
]

STABILIZER_SUPPORTS: tuple[tuple[int, ...], ...] = ((4, 5, 6, 7), (2, 3, 6, 7), (1, 3, 5, 7))
LOGICAL_X_SUPPORT = (1, 2, 3)
LOGICAL_Z_SUPPORT = (1, 2, 3)

# Each check is repeated back to back: bit-flip checks first, then phase checks.
EXTRACTION_ORDER: tuple[tuple[str, tuple[int, ...]], ...] = tuple(
    (kind, sup) for kind in ("bit", "phase") for sup in STABILIZER_SUPPORTS for _ in range(2)
)

DATA_QUBITS = tuple(range(1, 8))
ANCILLA_QUBITS = (8, 9, 10, 11)
VERIFY_QUBIT = 12


class LogicalGate(str, Enum):
    H = "H"
    X = "X"
    P = "P"

    @classmethod
    def parse(cls, name: "str | LogicalGate") -> "LogicalGate":
        if isinstance(name, LogicalGate):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise ValueError("gate must be h|x|p") from None


def _read(name_or_path: str | Path) -> tuple[str, str]:
    p = Path(name_or_path)
    if p.suffix == ".sqc" and p.exists():
        return p.read_text(encoding="utf-8"), p.stem
    text = resources.files("qec713.steane").joinpath("data", f"{name_or_path}.sqc").read_text(encoding="utf-8")
    return text, str(name_or_path)


@lru_cache(maxsize=None)
def _load_cached(name_or_path: str) -> Circuit:
    text, label = _read(name_or_path)
    return parse_circuit(text, label=label)


def load_circuit(name_or_path: str | Path) -> Circuit:
    """Load a shipped circuit by stem (``"encoder"``) or any ``.sqc`` file path."""
    return _load_cached(str(name_or_path))


def steane_encoder(path: str | Path | None = None) -> Circuit:
    c = load_circuit(path or "encoder")
    if c.width != 7 or c.n_measurements:
        raise ValueError("encoder must be a unitary 7-qubit circuit")
    return c


def steane_decoder(encoder: Circuit | None = None) -> Circuit:
    enc = encoder or steane_encoder()
    dec = enc.inverse().noiseless()
    return Circuit(7, dec.instructions, "decoder")


def logical_gate_circuit(g: LogicalGate | str, noisy: bool = True) -> Circuit:
    g = LogicalGate.parse(g)
    if g is LogicalGate.H:
        ins = [Instruction("H", (q,), None, noisy) for q in range(1, 8)]
    elif g is LogicalGate.X:
        ins = [Instruction("X", (q,), None, noisy) for q in LOGICAL_X_SUPPORT]
    else:
        ins = [Instruction("SDG", (q,), None, noisy) for q in range(1, 8)]
    return Circuit(7, ins, f"logical-{g.value}")


def shor_state_prep(final_hadamards: bool = True, path: str | Path | None = None) -> Circuit:
    """Verified 4-qubit ancilla on qubits 1-4 (verification qubit 5 is discarded).

    With ``final_hadamards=False`` the Hadamards after the last verification
    are dropped, leaving the GHZ state used by the phase checks.
    """
    c = load_circuit(path or "shor_prep")
    if final_hadamards:
        return c
    last_meas = max(i for i, ins in enumerate(c.instructions) if ins.is_measurement)
    kept = [ins for i, ins in enumerate(c.instructions) if not (i > last_meas and ins.op == "H")]
    return Circuit(c.width, kept, "ghz_prep")


def syndrome_template(kind: str) -> Circuit:
    if kind not in ("bit", "phase"):
        raise ValueError("syndrome kind must be 'bit' or 'phase'")
    return load_circuit(f"syndrome_{kind}")


def extraction_circuit(kind: str, support: tuple[int, ...]) -> Circuit:
    """Coupling of a prepared ancilla (qubits 8-11) to the data block (qubits 1-7)."""
    tmpl = syndrome_template(kind)
    mapping = {i + 1: s for i, s in enumerate(support)}
    mapping.update({5 + i: a for i, a in enumerate(ANCILLA_QUBITS)})
    return tmpl.remapped(mapping, 11, f"{kind}{''.join(map(str, support))}")


def qec_round_circuit(
    rounds: int = 1,
    order: tuple[tuple[str, tuple[int, ...]], ...] = EXTRACTION_ORDER,
    shor_path: str | Path | None = None,
) -> Circuit:
    """One or more full noisy QEC rounds on a 12-qubit register.

    Qubits 1-7 hold the data, 8-11 the ancilla and 12 the verification qubit.
    Every extraction prepares a fresh ancilla.
    """
    prep_map = {1: 8, 2: 9, 3: 10, 4: 11, 5: VERIFY_QUBIT}
    ins: list[Instruction] = []
    for _ in range(rounds):
        for kind, support in order:
            prep = shor_state_prep(kind == "bit", shor_path).remapped(prep_map, 12)
            ins.extend(prep.instructions)
            ins.extend(extraction_circuit(kind, support).remapped({q: q for q in range(1, 12)}, 12).instructions)
    return Circuit(12, ins, f"qec-x{rounds}")
