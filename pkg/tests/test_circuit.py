import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qec713.steane import Circuit, CircuitError, CircuitParseError, Instruction, parse_circuit, serialize_circuit
from qec713.steane.circuit import GATES_1Q


def test_parse_minimal():
    c = parse_circuit("qubits 2\nH 1\nCNOT 1 2")
    assert c.width == 2 and len(c) == 2
    assert c.instructions[1] == Instruction("CNOT", (1, 2))


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("qubits 2\nCNOT 1 1", 2, "control = target"),
        ("qubits 2\nFOO 1", 2, "unknown mnemonic"),
        ("qubits 2\nH 1 2", 2, "takes 1 qubit"),
        ("qubits 2\n# c\nH 3", 3, "out of range"),
        ("qubits 2\nMEASZ 1", 2, "expect="),
        ("qubits 2\nMEASZ 1 expect=2", 2, "expect must be 0 or 1"),
        ("H 1", 1, "header"),
        ("qubits 2\nDISCARD 1", 2, "without a preceding measurement"),
        ("qubits 2\nMEASZ 1 expect=0\nDISCARD 1\nH 1", 4, "discarded"),
        ("qubits 2\nPREP 1 ideal", 2, "only valid on gates"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(CircuitParseError) as info:
        parse_circuit(text)
    assert info.value.lineno == line
    assert str(info.value).startswith(f"line {line}:")
    assert fragment in str(info.value)


def test_discarded_qubit_can_be_reprepared():
    c = parse_circuit("qubits 1\nMEASZ 1 expect=0\nDISCARD 1\nPREP 1\nH 1")
    assert [i.op for i in c] == ["MEASZ", "DISCARD", "PREP", "H"]
    assert c.discarded_at_end() == ()


def test_comments_case_and_canonical_form():
    text = "# header comment\nqubits 3\n  h 1   # noisy\ncnot 1 2 ideal\nparityz 1 2 expect=1\n\n"
    c = parse_circuit(text)
    assert serialize_circuit(c) == "qubits 3\nH 1\nCNOT 1 2 ideal\nPARITYZ 1 2 expect=1\n"
    assert not c.instructions[1].noisy and c.n_sites == 1


def test_instruction_validation():
    with pytest.raises(CircuitError):
        Instruction("CNOT", (1,))
    with pytest.raises(CircuitError):
        Instruction("H", (1,), expect=0)
    with pytest.raises(CircuitError):
        Circuit(2, (Instruction("H", (3,)),))


def test_inverse_swaps_phase_gates():
    c = parse_circuit("qubits 2\nS 1\nCNOT 1 2\nSDG 2")
    assert [i.to_text() for i in c.inverse()] == ["S 2", "CNOT 1 2", "SDG 1"]


@st.composite
def circuits(draw):
    n = draw(st.integers(2, 6))
    q = st.integers(1, n)
    lines = []
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(["g1", "cnot", "meas", "parity", "prep"]))
        ideal = draw(st.booleans())
        if kind == "g1":
            lines.append(f"{draw(st.sampled_from(GATES_1Q))} {draw(q)}{' ideal' if ideal else ''}")
        elif kind == "cnot":
            c, t = draw(st.lists(q, min_size=2, max_size=2, unique=True))
            lines.append(f"CNOT {c} {t}{' ideal' if ideal else ''}")
        elif kind == "meas":
            lines.append(f"{draw(st.sampled_from(['MEASZ', 'MEASX']))} {draw(q)} expect={draw(st.integers(0, 1))}")
        elif kind == "parity":
            qs = draw(st.lists(q, min_size=1, max_size=n, unique=True))
            lines.append(f"{draw(st.sampled_from(['PARITYZ', 'PARITYX']))} {' '.join(map(str, qs))} expect=0")
        else:
            lines.append(f"PREP {draw(q)}")
    return "\n".join([f"qubits {n}", *lines]) + "\n"


@settings(max_examples=150, deadline=None)
@given(circuits())
def test_round_trip(text):
    c = parse_circuit(text)
    assert serialize_circuit(c) == text
    assert parse_circuit(serialize_circuit(c)) == c
