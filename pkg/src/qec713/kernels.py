"""Kernel selection.

The compiled Cython kernels are used when the extension imports; otherwise
the numpy fallback is loaded.  Setting ``QEC713_PURE=1`` forces the
fallback, which is how the test-suite exercises both implementations.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND: str

if os.environ.get("QEC713_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
pauli_channel = _impl.pauli_channel
project_parity = _impl.project_parity

__all__ = ["BACKEND", "apply_1q", "apply_cnot", "pauli_channel", "project_parity"]
