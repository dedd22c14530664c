"""Pauli-frame bookkeeping for single faults.

For a Clifford circuit whose postselections are deterministic on the ideal
input, a Pauli fault only matters through two things: the Pauli it leaves
on the output qubits and the set of postselections it flips.  Both are
linear over GF(2) in the fault, so a single backward sweep gives the effect
of an X or Z fault after every instruction, and Y = X xor Z.

An *effect code* packs the output Pauli as ``x | z << n_out`` (bit ``k`` is
the ``k``-th output qubit) and the flipped postselections as a separate
bitmask over the circuit's measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

import numpy as np

from ..steane.circuit import Circuit
from .poly import TruncatedPoly, pair_index

__all__ = [
    "PAULIS",
    "ErrorLocation",
    "SiteTable",
    "site_table",
    "propagate_frame",
    "enumerate_configs",
    "config_sum",
    "config_sum_reference",
]

PAULIS = ("X", "Y", "Z")
_WORD = 64
_MASK64 = (1 << _WORD) - 1


@dataclass(frozen=True)
class ErrorLocation:
    instruction: int
    site: str
    pauli: str
    qubit: int

    def __post_init__(self):
        if self.site not in ("single", "control", "target"):
            raise ValueError(f"invalid site {self.site!r}")
        if self.pauli not in PAULIS:
            raise ValueError(f"invalid pauli {self.pauli!r}")


@dataclass(frozen=True)
class SiteTable:
    """Effects of X, Y, Z faults at each error site of one or more circuits."""

    sites: tuple[tuple[int, str, int], ...]  # (instruction, site, qubit)
    codes: np.ndarray  # (L, 3) int64 output-Pauli codes
    masks: np.ndarray  # (L, 3, words) uint64 flipped-postselection masks
    n_out: int

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def locations(self, i: int) -> tuple[ErrorLocation, ...]:
        ins, site, q = self.sites[i]
        return tuple(ErrorLocation(ins, site, p, q) for p in PAULIS)

    def concat(self, other: "SiteTable") -> "SiteTable":
        """Join the sites of two independent circuits producing the same output register.

        Measurement masks are kept disjoint by shifting ``other``'s bits.
        """
        if other.n_out != self.n_out:
            raise ValueError("site tables have different output registers")
        words = self.masks.shape[2] + other.masks.shape[2]
        m = np.zeros((self.n_sites + other.n_sites, 3, words), dtype=np.uint64)
        m[: self.n_sites, :, : self.masks.shape[2]] = self.masks
        m[self.n_sites :, :, self.masks.shape[2] :] = other.masks
        return SiteTable(self.sites + other.sites, np.vstack([self.codes, other.codes]), m, self.n_out)


def _measure_bits(circuit: Circuit) -> list[int]:
    idx, out = 0, []
    for ins in circuit.instructions:
        out.append(idx if ins.is_measurement else -1)
        idx += ins.is_measurement
    return out


def _sites_of(k: int, ins) -> list[tuple[int, str, int]]:
    if not ins.noisy or not ins.is_gate:
        return []
    if ins.op == "CNOT":
        return [(k, "control", ins.qubits[0]), (k, "target", ins.qubits[1])]
    return [(k, "single", ins.qubits[0])]


def site_table(circuit: Circuit) -> SiteTable:
    """Backward sweep computing the effect of a fault right after each noisy gate."""
    outputs = circuit.output_qubits()
    n_out = len(outputs)
    shift = 2 * n_out  # measurement bits live above the Pauli code while sweeping
    ex = {q: 0 for q in range(1, circuit.width + 1)}
    ez = dict(ex)
    for k, q in enumerate(outputs):
        ex[q] = 1 << k
        ez[q] = 1 << (n_out + k)
    mbits = _measure_bits(circuit)
    rows: list[tuple[tuple[int, str, int], int, int]] = []
    for k in range(len(circuit.instructions) - 1, -1, -1):
        ins = circuit.instructions[k]
        for s in reversed(_sites_of(k, ins)):
            rows.append((s, ex[s[2]], ez[s[2]]))
        op = ins.op
        if op == "H":
            q = ins.qubits[0]
            ex[q], ez[q] = ez[q], ex[q]
        elif op in ("S", "SDG"):
            q = ins.qubits[0]
            ex[q] ^= ez[q]
        elif op == "CNOT":
            c, t = ins.qubits
            ex[c] ^= ex[t]
            ez[t] ^= ez[c]
        elif op in ("MEASZ", "PARITYZ"):
            bit = 1 << (shift + mbits[k])
            for q in ins.qubits:
                ex[q] ^= bit
        elif op in ("MEASX", "PARITYX"):
            bit = 1 << (shift + mbits[k])
            for q in ins.qubits:
                ez[q] ^= bit
        elif op in ("PREP", "DISCARD"):
            q = ins.qubits[0]
            ex[q] = ez[q] = 0
        # X and Z gates commute with Pauli frames up to phase.
    rows.reverse()
    words = max(1, math.ceil(circuit.n_measurements / _WORD))
    L = len(rows)
    codes = np.zeros((L, 3), dtype=np.int64)
    masks = np.zeros((L, 3, words), dtype=np.uint64)
    low = (1 << shift) - 1
    for i, (_, fx, fz) in enumerate(rows):
        for j, eff in enumerate((fx, fx ^ fz, fz)):
            codes[i, j] = eff & low
            m = eff >> shift
            for w in range(words):
                masks[i, j, w] = (m >> (_WORD * w)) & _MASK64
    return SiteTable(tuple(r[0] for r in rows), codes, masks, n_out)


def propagate_frame(circuit: Circuit, x: int, z: int, start: int = 0) -> tuple[int, int, int]:
    """Forward propagation of a frame (bit ``q-1`` for qubit ``q``) from instruction ``start``.

    Returns ``(x, z, flipped)`` on the full register; ``flipped`` has bit ``j``
    set when the ``j``-th postselection of the circuit is flipped.
    """
    mbits = _measure_bits(circuit)
    flipped = 0
    for k in range(start, len(circuit.instructions)):
        ins = circuit.instructions[k]
        op = ins.op
        if op == "H":
            b = 1 << (ins.qubits[0] - 1)
            bx, bz = x & b, z & b
            x = (x & ~b) | bz
            z = (z & ~b) | bx
        elif op in ("S", "SDG"):
            b = 1 << (ins.qubits[0] - 1)
            z ^= x & b
        elif op == "CNOT":
            c, t = (1 << (q - 1) for q in ins.qubits)
            if x & c:
                x ^= t
            if z & t:
                z ^= c
        elif ins.is_measurement:
            part = x if ins.basis == "Z" else z
            par = sum((part >> (q - 1)) & 1 for q in ins.qubits) & 1
            flipped |= par << mbits[k]
        elif op in ("PREP", "DISCARD"):
            b = 1 << (ins.qubits[0] - 1)
            x &= ~b
            z &= ~b
    return x, z, flipped


def _weights(L: int) -> tuple[TruncatedPoly, TruncatedPoly, list[TruncatedPoly]]:
    p0 = TruncatedPoly.p0()
    pa = [TruncatedPoly.variable(v) for v in ("px", "py", "pz")]
    return p0**L, p0 ** max(L - 1, 0), pa


def enumerate_configs(circuit: Circuit) -> Iterator[tuple[TruncatedPoly, tuple[ErrorLocation, ...]]]:
    """All fault configurations of order at most two with their truncated weights.

    Two faults on the same site are never listed: their product is a single
    Pauli already counted at first order.
    """
    sites = [s for k, ins in enumerate(circuit.instructions) for s in _sites_of(k, ins)]
    L = len(sites)
    w0, w1, pa = _weights(L)
    yield w0, ()
    for ins, site, q in sites:
        for a, p in enumerate(PAULIS):
            yield pa[a] * w1, (ErrorLocation(ins, site, p, q),)
    for (i1, s1, q1), (i2, s2, q2) in combinations(sites, 2):
        for a, p in enumerate(PAULIS):
            for b, r in enumerate(PAULIS):
                yield pa[a] * pa[b], (ErrorLocation(i1, s1, p, q1), ErrorLocation(i2, s2, r, q2))


def config_sum(table: SiteTable, g: Callable[[np.ndarray], np.ndarray], chunk: int = 1 << 18) -> TruncatedPoly:
    """Sum of ``weight * g(code)`` over accepted configurations of order <= 2.

    ``g`` maps an int64 array of output codes to values.  A configuration is
    accepted when its combined postselection mask is zero.  Summation order
    is fixed, so results are bitwise reproducible.
    """
    L = table.n_sites
    c = np.zeros(10)
    g0 = float(np.asarray(g(np.zeros(1, dtype=np.int64)))[0])
    w0, w1, _ = _weights(L)
    total = w0.coeffs * g0
    codes, masks = table.codes, table.masks
    ok1 = ~np.any(masks != 0, axis=2)
    single = np.where(ok1, np.asarray(g(codes.reshape(-1))).reshape(L, 3), 0.0).sum(axis=0)
    for a in range(3):
        c[1 + a] += single[a]
    total = total + (TruncatedPoly(c) * w1).coeffs
    quad = np.zeros(10)
    if L > 1:
        iu, ju = np.triu_indices(L, 1)
        for start in range(0, iu.size, chunk):
            I, J = iu[start : start + chunk], ju[start : start + chunk]
            for a in range(3):
                for b in range(3):
                    ok = ~np.any((masks[I, a] ^ masks[J, b]) != 0, axis=1)
                    vals = np.asarray(g(codes[I, a] ^ codes[J, b]))
                    quad[pair_index(a, b)] += float(np.sum(np.where(ok, vals, 0.0)))
    return TruncatedPoly(total + quad)


def config_sum_reference(circuit: Circuit, g: Callable[[np.ndarray], np.ndarray]) -> TruncatedPoly:
    """Slow oracle for :func:`config_sum`: forward-propagate every enumerated configuration."""
    outputs = circuit.output_qubits()
    n_out = len(outputs)
    total = TruncatedPoly()
    for weight, errs in enumerate_configs(circuit):
        code, flipped = 0, 0
        for e in errs:
            b = 1 << (e.qubit - 1)
            x = b if e.pauli in ("X", "Y") else 0
            z = b if e.pauli in ("Z", "Y") else 0
            fx, fz, fm = propagate_frame(circuit, x, z, e.instruction + 1)
            for k, q in enumerate(outputs):
                code ^= ((fx >> (q - 1)) & 1) << k
                code ^= ((fz >> (q - 1)) & 1) << (n_out + k)
            flipped ^= fm
        if flipped == 0:
            total = total + weight * float(np.asarray(g(np.array([code], dtype=np.int64)))[0])
    return total
