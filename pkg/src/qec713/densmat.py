"""Dense density-matrix engine.

Qubits are numbered from 1 and qubit 1 is the most significant bit of a
basis-state index, so on ``n`` qubits qubit ``q`` lives at index bit
``n - q``.  Gates are applied in place by the kernels in
:mod:`qec713.kernels`; the public functions copy their input unless
``inplace=True`` is passed.

States carry a ``trace_weight``: postselection leaves the state
unnormalised and multiplies the weight by the branch probability, so a
sequence of postselections is renormalised exactly once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

__all__ = [
    "StatePrep",
    "PureState",
    "DensityMatrix",
    "QubitIndexError",
    "pure_state",
    "to_density",
    "zero_state",
    "tensor",
    "apply_1q_unitary",
    "apply_cnot",
    "partial_trace",
    "postselect",
    "postselect_parity",
    "reset_qubit",
    "fidelity",
    "expectation",
    "GATES",
]

SQRT_HALF = 1.0 / np.sqrt(2.0)

GATES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
}


class QubitIndexError(ValueError):
    """A qubit index outside ``1..n``, or a repeated index where distinct ones are needed."""


@dataclass(frozen=True)
class StatePrep:
    """Input state ``cos(alpha)|0> + exp(i beta) sin(alpha)|1>``."""

    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        n = int(round(np.log2(amp.size)))
        if amp.ndim != 1 or amp.size != 1 << n:
            raise ValueError("amplitude vector length must be a power of two")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
            raise ValueError("pure state must have unit norm")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1


class DensityMatrix:
    """A (possibly unnormalised) density operator on ``n_qubits`` qubits."""

    __slots__ = ("data", "trace_weight")

    def __init__(self, data: np.ndarray, trace_weight: float | None = None):
        data = np.ascontiguousarray(data, dtype=complex)
        d = data.shape[0]
        if data.ndim != 2 or data.shape[1] != d or d < 2 or d & (d - 1):
            raise ValueError("density matrix must be square with power-of-two dimension")
        self.data = data
        self.trace_weight = float(np.trace(data).real) if trace_weight is None else float(trace_weight)

    @property
    def n_qubits(self) -> int:
        return self.data.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.data.copy(), self.trace_weight)

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def normalized(self) -> "DensityMatrix":
        w = self.trace()
        if w <= 0:
            raise ValueError("cannot normalise a state with zero trace")
        return DensityMatrix(self.data / w, 1.0)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def __repr__(self) -> str:
        return f"DensityMatrix(n_qubits={self.n_qubits}, trace_weight={self.trace_weight:.6g})"


def _bit(n: int, q: int) -> int:
    if not 1 <= q <= n:
        raise QubitIndexError(f"qubit {q} out of range 1..{n}")
    return n - q


def pure_state(prep: StatePrep) -> PureState:
    return PureState(np.array([np.cos(prep.alpha), np.exp(1j * prep.beta) * np.sin(prep.alpha)]))


def to_density(psi: PureState | np.ndarray) -> DensityMatrix:
    v = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=complex)
    return DensityMatrix(np.outer(v, v.conj()), 1.0)


def zero_state(n: int) -> DensityMatrix:
    data = np.zeros((1 << n, 1 << n), dtype=complex)
    data[0, 0] = 1.0
    return DensityMatrix(data, 1.0)


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Kronecker product; the first factor holds the most significant qubits."""
    data = states[0].data
    weight = states[0].trace_weight
    for s in states[1:]:
        data = np.kron(data, s.data)
        weight *= s.trace_weight
    return DensityMatrix(data, weight)


def _target(rho: DensityMatrix, inplace: bool) -> DensityMatrix:
    return rho if inplace else rho.copy()


def apply_1q_unitary(rho: DensityMatrix, U, q: int, *, inplace: bool = False) -> DensityMatrix:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2) or np.linalg.norm(U.conj().T @ U - np.eye(2)) > 1e-12:
        raise ValueError("U must be a 2x2 unitary")
    bit = _bit(rho.n_qubits, q)
    out = _target(rho, inplace)
    kernels.apply_1q(out.data, bit, U[0, 0], U[0, 1], U[1, 0], U[1, 1])
    return out


def apply_cnot(rho: DensityMatrix, c: int, t: int, *, inplace: bool = False) -> DensityMatrix:
    n = rho.n_qubits
    if c == t:
        raise QubitIndexError("control and target must differ")
    cbit, tbit = _bit(n, c), _bit(n, t)
    out = _target(rho, inplace)
    kernels.apply_cnot(out.data, cbit, tbit)
    return out


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on ``keep``, whose order fixes the output qubit order."""
    n = rho.n_qubits
    keep = list(keep)
    if not keep or len(set(keep)) != len(keep):
        raise QubitIndexError("keep must be a nonempty set of distinct qubits")
    for q in keep:
        _bit(n, q)
    if keep == list(range(1, n + 1)):
        return rho.copy()
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    rows = letters[:n]
    cols = [letters[n + i] if (i + 1) in keep else rows[i] for i in range(n)]
    out_idx = "".join(rows[q - 1] for q in keep) + "".join(cols[q - 1] for q in keep)
    spec = rows + "".join(cols) + "->" + out_idx
    t = np.einsum(spec, rho.data.reshape((2,) * (2 * n)))
    k = len(keep)
    return DensityMatrix(t.reshape(1 << k, 1 << k), rho.trace_weight)


def _hadamard_all(data: np.ndarray, bits: Iterable[int]) -> None:
    h = GATES["H"]
    for b in bits:
        kernels.apply_1q(data, b, h[0, 0], h[0, 1], h[1, 0], h[1, 1])


def postselect_parity(
    rho: DensityMatrix, qubits: Sequence[int], parity: int, basis: str = "Z", *, inplace: bool = False
) -> tuple[DensityMatrix, float]:
    """Project onto the eigenspace of the Z (or X) product on ``qubits`` with eigenvalue (-1)^parity.

    Returns the unnormalised projected state and the branch probability.
    """
    n = rho.n_qubits
    bits = [_bit(n, q) for q in qubits]
    if len(set(bits)) != len(bits) or not bits:
        raise QubitIndexError("parity qubits must be distinct and nonempty")
    if parity not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    basis = basis.upper()
    if basis not in ("Z", "X"):
        raise ValueError("basis must be Z or X")
    before = rho.trace()
    weight = rho.trace_weight
    out = _target(rho, inplace)
    mask = sum(1 << b for b in bits)
    if basis == "X":
        _hadamard_all(out.data, bits)
    kernels.project_parity(out.data, mask, parity)
    if basis == "X":
        _hadamard_all(out.data, bits)
    after = out.trace()
    prob = 0.0 if before == 0 else min(max(after / before, 0.0), 1.0)
    out.trace_weight = weight * prob
    return out, prob


def postselect(
    rho: DensityMatrix, q: int, outcome: int, basis: str = "Z", *, inplace: bool = False
) -> tuple[DensityMatrix, float]:
    """Single-qubit projective postselection; the result is not renormalised."""
    return postselect_parity(rho, [q], outcome, basis, inplace=inplace)


def reset_qubit(rho: DensityMatrix, q: int) -> DensityMatrix:
    """Trace out ``q`` and re-prepare it in |0> at the same position."""
    n = rho.n_qubits
    b = _bit(n, q)
    v = rho.data.reshape(1 << (n - 1 - b), 2, 1 << b, 1 << (n - 1 - b), 2, 1 << b)
    reduced = v[:, 0, :, :, 0] + v[:, 1, :, :, 1]
    out = np.zeros_like(v)
    out[:, 0, :, :, 0] = reduced
    return DensityMatrix(out.reshape(rho.data.shape), rho.trace_weight)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr[rho sigma] for normalised states, clamped to [0, 1 + 1e-9]."""
    if rho.data.shape != sigma.data.shape:
        raise ValueError("dimension mismatch")
    for s in (rho, sigma):
        if abs(s.trace() - 1.0) > 1e-9:
            raise ValueError("fidelity requires normalised states")
    val = np.sum(rho.data * sigma.data.T)
    return float(min(max(val.real, 0.0), 1.0 + 1e-9))


def expectation(rho: DensityMatrix, paulis: dict[int, str]) -> float:
    """<P> for a Pauli string given as ``{qubit: 'X'|'Y'|'Z'}`` (brute-force Kronecker product)."""
    n = rho.n_qubits
    op = np.array([[1.0]], dtype=complex)
    for q in range(1, n + 1):
        op = np.kron(op, GATES[paulis.get(q, "I")])
    return float(np.real(np.trace(op @ rho.data)) / rho.trace())
