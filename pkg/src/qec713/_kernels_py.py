"""Pure numpy implementation of the in-place density-matrix kernels.

Same signatures and semantics as the compiled ``_kernels`` module.  Arrays
are viewed as ``(high, bit, low, high, bit, low)`` so each kernel reduces to
a few vectorised slice operations.
"""

from __future__ import annotations

import numpy as np


def _view(m: np.ndarray, bit: int) -> np.ndarray:
    d = m.shape[0]
    low = 1 << bit
    high = d // (2 * low)
    return m.reshape(high, 2, low, high, 2, low)


def apply_1q(m, bit, u00, u01, u10, u11):
    v = _view(m, bit)
    a, c = v[:, 0].copy(), v[:, 1].copy()
    v[:, 0] = u00 * a + u01 * c
    v[:, 1] = u10 * a + u11 * c
    a, c = v[:, :, :, :, 0].copy(), v[:, :, :, :, 1].copy()
    v[:, :, :, :, 0] = a * np.conj(u00) + c * np.conj(u01)
    v[:, :, :, :, 1] = a * np.conj(u10) + c * np.conj(u11)


def _cnot_perm(d: int, cbit: int, tbit: int) -> np.ndarray:
    idx = np.arange(d)
    return np.where((idx >> cbit) & 1, idx ^ (1 << tbit), idx)


def apply_cnot(m, cbit, tbit):
    perm = _cnot_perm(m.shape[0], cbit, tbit)
    m[...] = m[np.ix_(perm, perm)]


def pauli_channel(m, bit, px, py, pz):
    p0 = 1.0 - px - py - pz
    v = _view(m, bit)
    a00 = v[:, 0, :, :, 0].copy()
    a01 = v[:, 0, :, :, 1].copy()
    a10 = v[:, 1, :, :, 0].copy()
    a11 = v[:, 1, :, :, 1].copy()
    v[:, 0, :, :, 0] = (p0 + pz) * a00 + (px + py) * a11
    v[:, 1, :, :, 1] = (p0 + pz) * a11 + (px + py) * a00
    v[:, 0, :, :, 1] = (p0 - pz) * a01 + (px - py) * a10
    v[:, 1, :, :, 0] = (p0 - pz) * a10 + (px - py) * a01


def _parities(d: int, mask: int) -> np.ndarray:
    x = np.arange(d) & mask
    par = np.zeros(d, dtype=np.int64)
    while np.any(x):
        par ^= x & 1
        x >>= 1
    return par


def project_parity(m, mask, parity):
    bad = _parities(m.shape[0], mask) != parity
    m[bad, :] = 0
    m[:, bad] = 0
