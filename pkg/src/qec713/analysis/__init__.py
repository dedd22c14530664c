"""Coefficient extraction, the reference table and comparison reports."""

from .angular import (
    BASIS_VIOLATION_TOL,
    DEFAULT_GRID,
    EXTENDED_BASIS,
    AngularCoeff,
    FidelityPolynomial,
    RankDeficientGridError,
    angular_decompose,
    extended_decompose,
)
from .compare import ComparisonReport, MonomialDiff, circuit_note, compare_reference, computed_polynomial
from .fit import FitResult, SingularStencilError, Stencil, cubic_stencil, default_stencil, fit_coefficients
from .reference import Advisory, MissingReferenceError, ReferenceEntry, ReferenceTable
from .regions import SOURCES, RegionRow, region_scan

__all__ = [
    "BASIS_VIOLATION_TOL",
    "DEFAULT_GRID",
    "EXTENDED_BASIS",
    "AngularCoeff",
    "FidelityPolynomial",
    "RankDeficientGridError",
    "angular_decompose",
    "extended_decompose",
    "ComparisonReport",
    "MonomialDiff",
    "circuit_note",
    "compare_reference",
    "computed_polynomial",
    "FitResult",
    "SingularStencilError",
    "Stencil",
    "cubic_stencil",
    "default_stencil",
    "fit_coefficients",
    "Advisory",
    "MissingReferenceError",
    "ReferenceEntry",
    "ReferenceTable",
    "SOURCES",
    "RegionRow",
    "region_scan",
]
