"""Independent second-order backend based on Pauli-frame propagation."""

from .backend import FidelityPolys, UnsupportedExperimentError, experiment_sites, fidelity_polynomial
from .frames import (
    ErrorLocation,
    SiteTable,
    config_sum,
    config_sum_reference,
    enumerate_configs,
    propagate_frame,
    site_table,
)
from .poly import MONOMIALS, TruncatedPoly, poly_eval
from .statevec import NonDeterministicError, pauli_overlap_table, run_ideal

__all__ = [
    "FidelityPolys",
    "UnsupportedExperimentError",
    "experiment_sites",
    "fidelity_polynomial",
    "ErrorLocation",
    "SiteTable",
    "config_sum",
    "config_sum_reference",
    "enumerate_configs",
    "propagate_frame",
    "site_table",
    "MONOMIALS",
    "TruncatedPoly",
    "poly_eval",
    "NonDeterministicError",
    "pauli_overlap_table",
    "run_ideal",
]
