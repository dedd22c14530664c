"""Biased Pauli noise attached after one-qubit gates and CNOTs.

A noisy gate is the ideal gate followed by an independent Pauli channel
``rho -> p0 rho + px X rho X + py Y rho Y + pz Z rho Z`` on every qubit the
gate touches.  For the CNOT this product channel is exactly the 16-branch
sum with weights ``p_a p_b``.  Idle qubits and measurements are noiseless.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .densmat import DensityMatrix, _bit, apply_1q_unitary, apply_cnot

__all__ = ["PauliProbs", "pauli_channel", "apply_noisy_1q", "apply_noisy_cnot"]


@dataclass(frozen=True)
class PauliProbs:
    px: float = 0.0
    py: float = 0.0
    pz: float = 0.0

    def __post_init__(self):
        for name in ("px", "py", "pz"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if self.p0 < -1e-15:
            raise ValueError("px + py + pz must not exceed 1")

    @property
    def p0(self) -> float:
        return 1.0 - self.px - self.py - self.pz

    @property
    def is_zero(self) -> bool:
        return self.px == 0.0 and self.py == 0.0 and self.pz == 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.px, self.py, self.pz)

    @classmethod
    def uniform(cls, p: float) -> "PauliProbs":
        return cls(p, p, p)


def pauli_channel(rho: DensityMatrix, q: int, probs: PauliProbs, *, inplace: bool = False) -> DensityMatrix:
    out = rho if inplace else rho.copy()
    if not probs.is_zero:
        kernels.pauli_channel(out.data, _bit(rho.n_qubits, q), probs.px, probs.py, probs.pz)
    return out


def apply_noisy_1q(rho: DensityMatrix, U, q: int, probs: PauliProbs, *, inplace: bool = False) -> DensityMatrix:
    out = apply_1q_unitary(rho, U, q, inplace=inplace)
    return pauli_channel(out, q, probs, inplace=True)


def apply_noisy_cnot(rho: DensityMatrix, c: int, t: int, probs: PauliProbs, *, inplace: bool = False) -> DensityMatrix:
    out = apply_cnot(rho, c, t, inplace=inplace)
    pauli_channel(out, c, probs, inplace=True)
    return pauli_channel(out, t, probs, inplace=True)
