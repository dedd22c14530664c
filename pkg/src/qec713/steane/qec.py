"""Perfect and fault-tolerant error correction on the 7-qubit block."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..densmat import GATES, DensityMatrix, apply_1q_unitary, postselect_parity, tensor, zero_state
from ..noise import PauliProbs
from .library import EXTRACTION_ORDER, STABILIZER_SUPPORTS, extraction_circuit, shor_state_prep
from .simulate import DegenerateBranchError, run_circuit

__all__ = [
    "SimOutcome",
    "hamming_position",
    "perfect_qec",
    "perfect_syndrome_postselect",
    "prepare_ancilla",
    "ft_qec_round",
]


@dataclass(frozen=True)
class SimOutcome:
    state: DensityMatrix
    postselect_prob: float
    label: str = ""


def hamming_position(syndrome: tuple[int, int, int]) -> int:
    """Qubit flagged by a syndrome read against the supports in :data:`STABILIZER_SUPPORTS` (0 means none)."""
    s1, s2, s3 = syndrome
    return 4 * s1 + 2 * s2 + s3


def _check_block(rho: DensityMatrix) -> None:
    if rho.n_qubits != 7:
        raise ValueError(f"expected a 7-qubit state, got {rho.n_qubits} qubits")


def _bits(s: int) -> tuple[int, int, int]:
    return ((s >> 2) & 1, (s >> 1) & 1, s & 1)


@lru_cache(maxsize=1)
def _syndrome_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-syndrome basis masks, the correcting bit-flip permutations, and H^{x7} unnormalised."""
    idx = np.arange(128)
    masks = np.zeros((8, 128))
    perms = np.tile(idx, (8, 1))
    for s in range(8):
        ok = np.ones(128, dtype=bool)
        for sup, b in zip(STABILIZER_SUPPORTS, _bits(s)):
            par = sum((idx >> (7 - q)) & 1 for q in sup) & 1
            ok &= par == b
        masks[s] = ok
        if s:
            perms[s] = idx ^ (1 << (7 - hamming_position(_bits(s))))
    w = np.array([[1.0]])
    for _ in range(7):
        w = np.kron(w, np.array([[1.0, 1.0], [1.0, -1.0]]))
    return masks, perms, w


def _correct_z_type(m: np.ndarray) -> np.ndarray:
    masks, perms, _ = _syndrome_tables()
    out = np.zeros_like(m)
    for mask, perm in zip(masks, perms):
        out += (m * np.outer(mask, mask))[np.ix_(perm, perm)]
    return out


def perfect_qec(rho7: DensityMatrix) -> DensityMatrix:
    """Noiseless recovery: project on every joint syndrome, apply the Hamming correction, sum.

    X-type projectors commute with the X corrections, so the map factors into
    a Z-syndrome stage and an X-syndrome stage; the latter is the former
    conjugated by H on all seven qubits.
    """
    _check_block(rho7)
    _, _, w = _syndrome_tables()
    m = _correct_z_type(rho7.data)
    m = w @ _correct_z_type(w @ m @ w / 128) @ w / 128
    return DensityMatrix(m, rho7.trace_weight)


def _perfect_qec_branches(rho7: DensityMatrix) -> DensityMatrix:
    """Branch-by-branch form of :func:`perfect_qec`, kept as its test oracle."""
    _check_block(rho7)
    acc = np.zeros_like(rho7.data)
    for sx in range(8):
        zb = rho7.copy()
        for sup, b in zip(STABILIZER_SUPPORTS, _bits(sx)):
            postselect_parity(zb, sup, b, "Z", inplace=True)
        for sz in range(8):
            br = zb.copy()
            for sup, b in zip(STABILIZER_SUPPORTS, _bits(sz)):
                postselect_parity(br, sup, b, "X", inplace=True)
            if sx:
                apply_1q_unitary(br, GATES["X"], hamming_position(_bits(sx)), inplace=True)
            if sz:
                apply_1q_unitary(br, GATES["Z"], hamming_position(_bits(sz)), inplace=True)
            acc += br.data
    return DensityMatrix(acc, rho7.trace_weight)


def perfect_syndrome_postselect(rho7: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Noiseless projection onto the trivial syndrome; returns the unnormalised state and its probability."""
    _check_block(rho7)
    out = rho7.copy()
    total = 1.0
    for basis in ("Z", "X"):
        for sup in STABILIZER_SUPPORTS:
            out, p = postselect_parity(out, sup, 0, basis, inplace=True)
            total *= p
    if total < 1e-300:
        raise DegenerateBranchError("trivial syndrome has zero probability")
    return out, total


def prepare_ancilla(kind: str, probs: PauliProbs, shor_path: str | Path | None = None) -> DensityMatrix:
    """Verified ancilla for a ``"bit"`` (Shor state) or ``"phase"`` (GHZ) check, unnormalised."""
    circ = shor_state_prep(kind == "bit", shor_path)
    return run_circuit(circ, zero_state(circ.width), probs)


def ft_qec_round(
    rho7: DensityMatrix,
    probs: PauliProbs,
    *,
    order: tuple[tuple[str, tuple[int, ...]], ...] = EXTRACTION_ORDER,
    shor_path: str | Path | None = None,
) -> SimOutcome:
    """Twelve postselected syndrome extractions, each with a freshly prepared ancilla.

    No correction is applied: only the trivial-syndrome branch is kept, and
    the returned probability includes the ancilla verification steps.
    """
    _check_block(rho7)
    if not isinstance(probs, PauliProbs):
        raise TypeError("probs must be a PauliProbs")
    # Independent preparations give identical density matrices, so one per kind suffices.
    ancillas = {k: prepare_ancilla(k, probs, shor_path) for k in sorted({kind for kind, _ in order})}
    state = rho7.copy()
    for kind, support in order:
        state = run_circuit(extraction_circuit(kind, support), tensor(state, ancillas[kind]), probs)
        if state.trace_weight < 1e-300:
            raise DegenerateBranchError(f"{kind} check on {support} has zero probability")
    prob = state.trace_weight / rho7.trace_weight
    return SimOutcome(state.normalized(), prob, "ft-qec")

