"""Steane [7,1,3] code under biased Pauli noise.

Two independent backends compute the same fidelities: a dense
density-matrix simulator (:mod:`qec713.steane`) and an exact second-order
Pauli-frame expansion (:mod:`qec713.perturb`).
"""

from .densmat import DensityMatrix, PureState, StatePrep
from .kernels import BACKEND as KERNEL_BACKEND
from .noise import PauliProbs

__version__ = "0.1.0"

__all__ = ["DensityMatrix", "PureState", "StatePrep", "PauliProbs", "KERNEL_BACKEND", "__version__"]
