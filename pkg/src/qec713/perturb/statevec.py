"""Minimal pure-state simulator for ideal Clifford circuits.

Kept separate from :mod:`qec713.densmat` so the perturbative backend is an
independent check of the dense one.  Postselections must be deterministic
on the ideal state, which is what makes the Pauli-frame expansion valid.
"""

from __future__ import annotations

import numpy as np

from ..steane.circuit import Circuit

__all__ = ["NonDeterministicError", "run_ideal", "pauli_overlap_table", "bloch_vector"]

_R = 1.0 / np.sqrt(2.0)
_TOL = 1e-9


class NonDeterministicError(ValueError):
    """An ideal postselection or discard that is not certain / not a product."""


def _apply(v: np.ndarray, axis: int, f) -> np.ndarray:
    v = np.moveaxis(v, axis, 0)
    a, b = f(v[0], v[1])
    return np.moveaxis(np.stack([a, b]), 0, axis)


def _gate(v: np.ndarray, op: str, q: int) -> np.ndarray:
    ax = q - 1
    if op == "H":
        return _apply(v, ax, lambda a, b: ((a + b) * _R, (a - b) * _R))
    if op == "X":
        return _apply(v, ax, lambda a, b: (b, a))
    if op == "Z":
        return _apply(v, ax, lambda a, b: (a, -b))
    if op == "S":
        return _apply(v, ax, lambda a, b: (a, 1j * b))
    if op == "SDG":
        return _apply(v, ax, lambda a, b: (a, -1j * b))
    raise ValueError(op)


def _cnot(v: np.ndarray, c: int, t: int) -> np.ndarray:
    v = v.copy()
    idx = [slice(None)] * v.ndim
    idx[c - 1] = 1
    sub = v[tuple(idx)]
    tax = (t - 1) if t < c else (t - 2)
    v[tuple(idx)] = np.flip(sub, axis=tax)
    return v


def _parity_sign(shape, qubits) -> np.ndarray:
    par = np.zeros(shape, dtype=np.int8)
    for q in qubits:
        s = [1] * len(shape)
        s[q - 1] = 2
        par = par ^ np.arange(2, dtype=np.int8).reshape(s)
    return par


def _postselect(v: np.ndarray, qubits, basis: str, expect: int, where: str) -> np.ndarray:
    if basis == "X":
        for q in qubits:
            v = _gate(v, "H", q)
    keep = _parity_sign(v.shape, qubits) == expect
    prob = float(np.sum(np.abs(v[keep]) ** 2))
    if abs(prob - 1.0) > _TOL:
        raise NonDeterministicError(f"{where}: ideal outcome probability {prob:.6g}, expected 1")
    v = np.where(keep, v, 0) / np.sqrt(prob)
    if basis == "X":
        for q in qubits:
            v = _gate(v, "H", q)
    return v


def _factor(v: np.ndarray, qubits: list[int], where: str) -> np.ndarray:
    """Factor ``qubits`` out of ``v`` jointly and return the state with them reset to |0>."""
    axes = [q - 1 for q in qubits]
    rest_axes = [a for a in range(v.ndim) if a not in axes]
    m = np.transpose(v, axes + rest_axes).reshape(1 << len(axes), -1)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size > 1 and s[1] > 1e-7:
        raise NonDeterministicError(f"{where}: qubits {qubits} are entangled with the rest")
    k = int(np.argmax(np.linalg.norm(m, axis=1)))
    rest = m[k] / np.linalg.norm(m[k])
    out = np.zeros_like(m)
    out[0] = rest
    out = out.reshape(v.shape)  # axes ordered as axes + rest_axes
    return np.transpose(out, np.argsort(axes + rest_axes))


def run_ideal(circuit: Circuit, amplitudes: np.ndarray) -> np.ndarray:
    """Run ``circuit`` noiselessly; returns the output-qubit state vector.

    Discarded qubits must be unentangled, as a group, from the live ones;
    they are reset when re-prepared and dropped from the output.
    """
    n = circuit.width
    v = np.asarray(amplitudes, dtype=complex).reshape((2,) * n)
    discarded: list[int] = []
    for k, ins in enumerate(circuit.instructions):
        where = f"instruction {k} ({ins.to_text()})"
        op = ins.op
        if op == "CNOT":
            v = _cnot(v, *ins.qubits)
        elif ins.is_gate:
            v = _gate(v, op, ins.qubits[0])
        elif ins.is_measurement:
            v = _postselect(v, ins.qubits, ins.basis, ins.expect, where)
        elif op == "DISCARD":
            discarded.append(ins.qubits[0])
        elif op == "PREP":
            q = ins.qubits[0]
            if q in discarded:
                v = _factor(v, sorted(discarded), where)
                discarded.clear()
            else:
                v = _factor(v, [q], where)
    gone = list(circuit.discarded_at_end())
    if gone:
        v = _factor(v, gone, "final discard")
        shape = [slice(None)] * n
        for q in gone:
            shape[q - 1] = 0
        v = v[tuple(shape)]
    return v.reshape(-1)


def _sylvester(n: int) -> np.ndarray:
    h = np.array([[1.0]])
    for _ in range(n):
        h = np.kron(h, np.array([[1.0, 1.0], [1.0, -1.0]]))
    return h


def _reverse_bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    out = np.zeros_like(idx)
    for k in range(n):
        out |= ((idx >> k) & 1) << (n - 1 - k)
    return out


def pauli_overlap_table(v: np.ndarray) -> np.ndarray:
    """``T[x | z << n] = |<v| X^x Z^z |v>|**2`` with bit ``k`` of x, z acting on qubit ``k+1``."""
    v = np.asarray(v, dtype=complex)
    n = v.size.bit_length() - 1
    d = 1 << n
    rev = _reverse_bits(n)  # code bit k (qubit k+1) <-> index bit n-1-k
    idx = np.arange(d)
    w = np.conj(v[idx[None, :] ^ rev[:, None]]) * v[None, :]  # row x (code order)
    f = w @ _sylvester(n)  # f[x, m] = sum_i w[x, i] (-1)^{m.i}
    t = np.abs(f[:, rev]) ** 2  # t[x, z]
    return np.ascontiguousarray(t.T).reshape(-1)


def bloch_vector(v: np.ndarray) -> np.ndarray:
    a, b = np.asarray(v, dtype=complex)
    return np.array([2 * np.real(np.conj(a) * b), 2 * np.imag(np.conj(a) * b), abs(a) ** 2 - abs(b) ** 2])
