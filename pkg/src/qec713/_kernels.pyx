# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""In-place density-matrix kernels.

Every routine mutates a C-contiguous complex128 square matrix ``m`` whose
dimension is a power of two.  Qubits are addressed by ``bit``, the position
of the qubit inside the row/column index (bit 0 is the least significant).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline int _parity(Py_ssize_t v) nogil:
    cdef int p = 0
    while v:
        p ^= 1
        v &= v - 1
    return p


def apply_1q(cplx[:, ::1] m, int bit, cplx u00, cplx u01, cplx u10, cplx u11):
    """m <- U m U^dagger with U acting on ``bit``."""
    cdef Py_ssize_t d = m.shape[0]
    cdef Py_ssize_t b = (<Py_ssize_t>1) << bit
    cdef Py_ssize_t i, j, i1, j1
    cdef cplx a, c
    cdef cplx v00 = u00.conjugate()
    cdef cplx v01 = u01.conjugate()
    cdef cplx v10 = u10.conjugate()
    cdef cplx v11 = u11.conjugate()
    with nogil:
        for i in range(d):
            if i & b:
                continue
            i1 = i | b
            for j in range(d):
                a = m[i, j]
                c = m[i1, j]
                m[i, j] = u00 * a + u01 * c
                m[i1, j] = u10 * a + u11 * c
        for i in range(d):
            for j in range(d):
                if j & b:
                    continue
                j1 = j | b
                a = m[i, j]
                c = m[i, j1]
                m[i, j] = a * v00 + c * v01
                m[i, j1] = a * v10 + c * v11


def apply_cnot(cplx[:, ::1] m, int cbit, int tbit):
    """Conjugate by the CNOT permutation (control ``cbit``, target ``tbit``)."""
    cdef Py_ssize_t d = m.shape[0]
    cdef Py_ssize_t cb = (<Py_ssize_t>1) << cbit
    cdef Py_ssize_t tb = (<Py_ssize_t>1) << tbit
    cdef Py_ssize_t i, j, i1, j1
    cdef cplx tmp
    with nogil:
        for i in range(d):
            if (i & cb) == 0 or (i & tb):
                continue
            i1 = i | tb
            for j in range(d):
                tmp = m[i, j]
                m[i, j] = m[i1, j]
                m[i1, j] = tmp
        for i in range(d):
            for j in range(d):
                if (j & cb) == 0 or (j & tb):
                    continue
                j1 = j | tb
                tmp = m[i, j]
                m[i, j] = m[i, j1]
                m[i, j1] = tmp


def pauli_channel(cplx[:, ::1] m, int bit, double px, double py, double pz):
    """Apply rho -> sum_a p_a s_a rho s_a on ``bit`` (blockwise closed form)."""
    cdef Py_ssize_t d = m.shape[0]
    cdef Py_ssize_t b = (<Py_ssize_t>1) << bit
    cdef Py_ssize_t i, j, i1, j1
    cdef double p0 = 1.0 - px - py - pz
    cdef double keep_d = p0 + pz
    cdef double swap_d = px + py
    cdef double keep_o = p0 - pz
    cdef double swap_o = px - py
    cdef cplx a00, a01, a10, a11
    with nogil:
        for i in range(d):
            if i & b:
                continue
            i1 = i | b
            for j in range(d):
                if j & b:
                    continue
                j1 = j | b
                a00 = m[i, j]
                a01 = m[i, j1]
                a10 = m[i1, j]
                a11 = m[i1, j1]
                m[i, j] = keep_d * a00 + swap_d * a11
                m[i1, j1] = keep_d * a11 + swap_d * a00
                m[i, j1] = keep_o * a01 + swap_o * a10
                m[i1, j] = keep_o * a10 + swap_o * a01


def project_parity(cplx[:, ::1] m, Py_ssize_t mask, int parity):
    """Zero rows and columns whose index parity on ``mask`` differs from ``parity``."""
    cdef Py_ssize_t d = m.shape[0]
    cdef Py_ssize_t i, j
    cdef int pi
    with nogil:
        for i in range(d):
            pi = _parity(i & mask) != parity
            for j in range(d):
                if pi or (_parity(j & mask) != parity):
                    m[i, j] = 0
