"""Exact second-order fidelity polynomials from the Pauli-frame expansion.

For an output state ``sum_c w_c P_c |Psi><Psi| P_c`` and a pure reference
``|Psi>``, the fidelity is ``sum_c w_c |<Psi|P_c|Psi>|^2``, so each fault
configuration contributes one lookup in a table of Pauli overlaps.  Gate
experiments compare two noisy states; their fidelity is a double sum that
equals a single sum over the concatenated fault sites of both copies.
Postselected experiments divide the accepted sum by the acceptance
polynomial in truncated arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..densmat import StatePrep
from ..steane.circuit import Circuit
from ..steane.experiments import ExperimentId
from ..steane.library import (
    STABILIZER_SUPPORTS,
    logical_gate_circuit,
    qec_round_circuit,
    steane_decoder,
    steane_encoder,
)
from .frames import SiteTable, config_sum, propagate_frame, site_table
from .poly import TruncatedPoly
from .statevec import bloch_vector, pauli_overlap_table, run_ideal

__all__ = ["FidelityPolys", "UnsupportedExperimentError", "fidelity_polynomial", "experiment_sites"]

N = 7
_ALL_CODES = np.arange(1 << (2 * N), dtype=np.int64)


class UnsupportedExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class FidelityPolys:
    """``f7`` and ``f1`` polynomials plus the acceptance polynomial; unpacks as ``(f7, f1)``."""

    f7: TruncatedPoly
    f1: TruncatedPoly
    acceptance: TruncatedPoly

    def __iter__(self):
        return iter((self.f7, self.f1))


@dataclass(frozen=True)
class _Structure:
    table: SiteTable
    ideal: Circuit  # noiseless circuit producing the reference 7-qubit state
    postselects: bool


def _widen(c: Circuit, width: int) -> Circuit:
    return Circuit(width, c.instructions, c.label)


@lru_cache(maxsize=32)
def _structure(key: str, encoder: str | None, shor: str | None) -> _Structure:
    exp = ExperimentId.from_key(key)
    enc = steane_encoder(encoder)
    gate = logical_gate_circuit(exp.gate) if exp.gate is not None else None
    if exp.kind == "encode":
        return _Structure(site_table(enc), enc, False)
    if exp.kind == "gate":
        ideal = enc + gate.noiseless()
        table = site_table(ideal).concat(site_table(enc + gate))
        return _Structure(table, ideal, False)
    front = enc if gate is None else enc + gate
    if exp.kind == "perfect-qec":
        return _Structure(site_table(front), front.noiseless(), True)
    wide = _widen(front, 12) + qec_round_circuit(exp.rounds, shor_path=shor)
    try:
        table = site_table(wide)
    except Exception as exc:  # pragma: no cover - malformed override circuits
        raise UnsupportedExperimentError(str(exc)) from exc
    if table.n_out != N:
        raise UnsupportedExperimentError("QEC circuit must leave exactly the 7 data qubits")
    return _Structure(table, wide.noiseless(), True)


def experiment_sites(exp: ExperimentId | str, encoder: str | Path | None = None, shor_path: str | Path | None = None) -> SiteTable:
    key = exp if isinstance(exp, str) else exp.key
    return _structure(ExperimentId.from_key(key).key, _opt(encoder), _opt(shor_path)).table


def _opt(p) -> str | None:
    return None if p is None else str(p)


@lru_cache(maxsize=4)
def _decoded_qubit1(encoder: str | None) -> np.ndarray:
    """Qubit-1 Pauli (0=I, 1=X, 2=Z, 3=Y) after noiseless decoding, per 7-qubit code."""
    dec = steane_decoder(steane_encoder(encoder))
    images = []
    for k in range(2 * N):
        x, z = (1 << k, 0) if k < N else (0, 1 << (k - N))
        fx, fz, _ = propagate_frame(dec, x, z)
        images.append((fx & 1) | ((fz & 1) << 1))
    out = np.zeros(_ALL_CODES.size, dtype=np.int64)
    for k, img in enumerate(images):
        out ^= np.where((_ALL_CODES >> k) & 1, img, 0)
    return out


def _syndromes(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(bit-flip, phase-flip) syndromes as 3-bit integers, first support most significant."""
    sx = np.zeros_like(codes)
    sz = np.zeros_like(codes)
    for sup in STABILIZER_SUPPORTS:
        px = np.zeros_like(codes)
        pz = np.zeros_like(codes)
        for q in sup:
            px ^= (codes >> (q - 1)) & 1
            pz ^= (codes >> (N + q - 1)) & 1
        sx = (sx << 1) | px
        sz = (sz << 1) | pz
    return sx, sz


def _correction_map() -> np.ndarray:
    sx, sz = _syndromes(_ALL_CODES)
    # Hamming position of the syndrome (0 = no correction), as a code bit
    fix_x = np.where(sx > 0, 1 << (np.maximum(sx, 1) - 1), 0)
    fix_z = np.where(sz > 0, 1 << (N + np.maximum(sz, 1) - 1), 0)
    return _ALL_CODES ^ fix_x ^ fix_z


def fidelity_polynomial(
    exp: ExperimentId | str,
    prep: StatePrep,
    *,
    qec_mode: str = "postselect",
    encoder: str | Path | None = None,
    shor_path: str | Path | None = None,
) -> FidelityPolys:
    """Second-order ``(F7, F1)`` for one experiment and input state.

    ``qec_mode`` applies to perfect QEC only, with the same meaning as in
    :func:`qec713.steane.run_experiment`.
    """
    if isinstance(exp, str):
        exp = ExperimentId.from_key(exp)
    if qec_mode not in ("postselect", "correct"):
        raise ValueError("qec_mode must be 'postselect' or 'correct'")
    st = _structure(exp.key, _opt(encoder), _opt(shor_path))
    psi = np.array([np.cos(prep.alpha), np.exp(1j * prep.beta) * np.sin(prep.alpha)])
    v_in = np.zeros(1 << st.ideal.width, dtype=complex)
    v_in[0] = psi[0]
    v_in[1 << (st.ideal.width - 1)] = psi[1]
    ideal = run_ideal(st.ideal, v_in)
    t7 = pauli_overlap_table(ideal)
    t7 = t7 / t7[0]  # |<v|v>|^2 up to rounding; makes the constant term exactly 1

    dec_ideal = run_ideal(steane_decoder(steane_encoder(encoder)), ideal).reshape(2, -1)
    phi = dec_ideal[:, 0]
    if np.linalg.norm(dec_ideal[:, 1:]) > 1e-9:
        raise UnsupportedExperimentError("ideal output does not decode to a product state")
    bx, by, bz = bloch_vector(phi)
    t1 = np.array([1.0, bx * bx, bz * bz, by * by])[_decoded_qubit1(_opt(encoder))]

    accept = np.ones(_ALL_CODES.size)
    if exp.kind == "perfect-qec":
        if qec_mode == "postselect":
            sx, sz = _syndromes(_ALL_CODES)
            accept = ((sx == 0) & (sz == 0)).astype(float)
        else:
            corr = _correction_map()
            t7, t1 = t7[corr], t1[corr]
    n7 = config_sum(st.table, lambda c: t7[c] * accept[c])
    n1 = config_sum(st.table, lambda c: t1[c] * accept[c])
    if st.postselects and not (exp.kind == "perfect-qec" and qec_mode == "correct"):
        d = config_sum(st.table, lambda c: accept[c])
    else:
        d = TruncatedPoly.constant(1.0)
    return FidelityPolys(n7 / d, n1 / d, d)
