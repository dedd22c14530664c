"""Circuit intermediate representation and its line-oriented text format.

Grammar (UTF-8, one instruction per line, ``#`` starts a comment)::

    circuit   := header line*
    header    := "qubits" N
    line      := gate1 q [ideal] | "CNOT" c t [ideal] | "PREP" q
               | ("MEASZ"|"MEASX") q "expect=" (0|1)
               | ("PARITYZ"|"PARITYX") q q* "expect=" (0|1)
               | "DISCARD" q
    gate1     := "H" | "X" | "Z" | "S" | "SDG"

Qubits are numbered 1..N.  Gates are noisy unless marked ``ideal``;
preparation, measurement and discard are always noiseless.  ``MEASZ`` and
``MEASX`` postselect a single-qubit outcome; ``PARITYZ``/``PARITYX``
postselect the joint parity of several qubits measured in the Z or X basis.
A discarded qubit may only be touched again by ``PREP``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "GATES_1Q",
    "MEASUREMENTS",
    "Instruction",
    "Circuit",
    "CircuitError",
    "CircuitParseError",
    "parse_circuit",
    "serialize_circuit",
]

GATES_1Q = ("H", "X", "Z", "S", "SDG")
MEASUREMENTS = ("MEASZ", "MEASX", "PARITYZ", "PARITYX")
_ALL_OPS = GATES_1Q + ("CNOT", "PREP", "DISCARD") + MEASUREMENTS
_INVERSE = {"H": "H", "X": "X", "Z": "Z", "S": "SDG", "SDG": "S", "CNOT": "CNOT"}


class CircuitError(ValueError):
    """Structurally invalid circuit."""


class CircuitParseError(CircuitError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Instruction:
    op: str
    qubits: tuple[int, ...]
    expect: int | None = None
    noisy: bool = True

    def __post_init__(self):
        if self.op not in _ALL_OPS:
            raise CircuitError(f"unknown instruction {self.op!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if not self.is_gate:
            object.__setattr__(self, "noisy", False)
        arity = {"CNOT": 2}.get(self.op, 1)
        if self.op in ("PARITYZ", "PARITYX"):
            if not self.qubits:
                raise CircuitError(f"{self.op} needs at least one qubit")
        elif len(self.qubits) != arity:
            raise CircuitError(f"{self.op} takes {arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.op} qubits must be distinct")
        if self.is_measurement:
            if self.expect not in (0, 1):
                raise CircuitError(f"{self.op} needs expect=0 or expect=1")
        elif self.expect is not None:
            raise CircuitError(f"{self.op} takes no expect= field")

    @property
    def is_gate(self) -> bool:
        return self.op in GATES_1Q or self.op == "CNOT"

    @property
    def is_measurement(self) -> bool:
        return self.op in MEASUREMENTS

    @property
    def basis(self) -> str | None:
        return self.op[-1] if self.is_measurement else None

    @property
    def n_sites(self) -> int:
        """Number of single-qubit error sites attached to this instruction."""
        return len(self.qubits) if (self.is_gate and self.noisy) else 0

    def with_noise(self, noisy: bool) -> "Instruction":
        return Instruction(self.op, self.qubits, self.expect, noisy)

    def remapped(self, mapping: Mapping[int, int]) -> "Instruction":
        return Instruction(self.op, tuple(mapping[q] for q in self.qubits), self.expect, self.noisy)

    def to_text(self) -> str:
        parts = [self.op, *map(str, self.qubits)]
        if self.is_measurement:
            parts.append(f"expect={self.expect}")
        if self.is_gate and not self.noisy:
            parts.append("ideal")
        return " ".join(parts)


@dataclass(frozen=True)
class Circuit:
    width: int
    instructions: tuple[Instruction, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if self.width < 1:
            raise CircuitError("width must be positive")
        _validate(self.width, self.instructions)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise CircuitError("cannot concatenate circuits of different width")
        label = "+".join(x for x in (self.label, other.label) if x)
        return Circuit(self.width, self.instructions + other.instructions, label)

    @property
    def n_sites(self) -> int:
        return sum(ins.n_sites for ins in self.instructions)

    @property
    def n_measurements(self) -> int:
        return sum(ins.is_measurement for ins in self.instructions)

    def discarded_at_end(self) -> tuple[int, ...]:
        """Qubits whose last instruction is a DISCARD (they are traced out of the output)."""
        live: dict[int, bool] = {}
        for ins in self.instructions:
            for q in ins.qubits:
                live[q] = ins.op != "DISCARD"
        return tuple(sorted(q for q, alive in live.items() if not alive))

    def output_qubits(self) -> tuple[int, ...]:
        gone = set(self.discarded_at_end())
        return tuple(q for q in range(1, self.width + 1) if q not in gone)

    def noiseless(self) -> "Circuit":
        return Circuit(self.width, [ins.with_noise(False) for ins in self.instructions], self.label)

    def with_noise(self, noisy: bool = True) -> "Circuit":
        return Circuit(self.width, [ins.with_noise(noisy) for ins in self.instructions], self.label)

    def inverse(self) -> "Circuit":
        """Reverse gate order and invert each gate; only defined for unitary circuits."""
        out = []
        for ins in reversed(self.instructions):
            if not ins.is_gate:
                raise CircuitError(f"cannot invert a circuit containing {ins.op}")
            out.append(Instruction(_INVERSE[ins.op], ins.qubits, None, ins.noisy))
        return Circuit(self.width, out, f"inverse({self.label})" if self.label else "")

    def remapped(self, mapping: Mapping[int, int], width: int, label: str | None = None) -> "Circuit":
        return Circuit(width, [ins.remapped(mapping) for ins in self.instructions], self.label if label is None else label)

    def to_text(self) -> str:
        return serialize_circuit(self)


def _validate(width: int, instructions: Iterable[Instruction]) -> None:
    measured: set[int] = set()
    discarded: set[int] = set()
    for k, ins in enumerate(instructions):
        for q in ins.qubits:
            if not 1 <= q <= width:
                raise CircuitError(f"instruction {k} ({ins.op}): qubit {q} out of range 1..{width}")
        if ins.op == "PREP":
            (q,) = ins.qubits
            discarded.discard(q)
            measured.discard(q)
            continue
        touched = [q for q in ins.qubits if q in discarded]
        if touched:
            raise CircuitError(f"instruction {k} ({ins.op}) touches discarded qubit {touched[0]}")
        if ins.op == "DISCARD":
            (q,) = ins.qubits
            if q not in measured:
                raise CircuitError(f"instruction {k}: DISCARD {q} without a preceding measurement")
            discarded.add(q)
        elif ins.is_measurement:
            measured.update(ins.qubits)
        else:
            measured.difference_update(ins.qubits)


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitParseError(lineno, f"expected integer {what}, got {tok!r}") from None


def parse_circuit(text: str, label: str = "") -> Circuit:
    width: int | None = None
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].upper()
        if width is None:
            if head != "QUBITS" or len(toks) != 2:
                raise CircuitParseError(lineno, "expected header 'qubits N'")
            width = _parse_int(toks[1], lineno, "width")
            if width < 1:
                raise CircuitParseError(lineno, "width must be positive")
            continue
        if head == "QUBITS":
            raise CircuitParseError(lineno, "duplicate 'qubits' header")
        if head not in _ALL_OPS:
            raise CircuitParseError(lineno, f"unknown mnemonic {toks[0]!r}")
        args = toks[1:]
        expect = None
        noisy = True
        if args and args[-1].lower() == "ideal":
            if head not in _INVERSE:
                raise CircuitParseError(lineno, f"'ideal' is only valid on gates, not {head}")
            noisy = False
            args = args[:-1]
        if head in MEASUREMENTS:
            if not args or not args[-1].lower().startswith("expect="):
                raise CircuitParseError(lineno, f"{head} requires expect=0|1")
            val = args[-1].split("=", 1)[1]
            if val not in ("0", "1"):
                raise CircuitParseError(lineno, f"expect must be 0 or 1, got {val!r}")
            expect = int(val)
            args = args[:-1]
        qubits = tuple(_parse_int(a, lineno, "qubit") for a in args)
        arity = 2 if head == "CNOT" else 1
        if head in ("PARITYZ", "PARITYX"):
            if not qubits:
                raise CircuitParseError(lineno, f"{head} needs at least one qubit")
        elif len(qubits) != arity:
            raise CircuitParseError(lineno, f"{head} takes {arity} qubit(s), got {len(qubits)}")
        for q in qubits:
            if not 1 <= q <= width:
                raise CircuitParseError(lineno, f"qubit {q} out of range 1..{width}")
        if len(set(qubits)) != len(qubits):
            what = "control = target" if head == "CNOT" else "repeated qubit"
            raise CircuitParseError(lineno, f"{head}: {what}")
        instructions.append(Instruction(head, qubits, expect, noisy))
        try:
            _validate(width, instructions)
        except CircuitError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
    if width is None:
        raise CircuitParseError(0, "missing 'qubits N' header")
    return Circuit(width, instructions, label)


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.width}"]
    lines.extend(ins.to_text() for ins in circuit.instructions)
    return "\n".join(lines) + "\n"
