"""Angular structure of the fidelity coefficients.

Every coefficient of the second-order expansion is a trigonometric function
of the input-state angles.  The default basis has three terms,
``a + b cos(4 alpha) + c cos(2 beta) sin(2 alpha)**2``; a wider basis can
be switched on to diagnose coefficients that do not fit it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from ..perturb.poly import MONOMIALS, TruncatedPoly

__all__ = [
    "AngularCoeff",
    "FidelityPolynomial",
    "RankDeficientGridError",
    "DEFAULT_GRID",
    "BASIS_VIOLATION_TOL",
    "EXTENDED_BASIS",
    "angular_decompose",
    "extended_decompose",
]

DEFAULT_GRID = tuple((a, b) for a in (0.0, math.pi / 8, math.pi / 4) for b in (0.0, math.pi / 4))
BASIS_VIOLATION_TOL = 1e-8


class RankDeficientGridError(ValueError):
    pass


def _basis3(alpha: float, beta: float) -> tuple[float, float, float]:
    return 1.0, math.cos(4 * alpha), math.cos(2 * beta) * math.sin(2 * alpha) ** 2


EXTENDED_BASIS = {
    "1": lambda a, b: 1.0,
    "cos(2 alpha)": lambda a, b: math.cos(2 * a),
    "cos(4 alpha)": lambda a, b: math.cos(4 * a),
    "cos(2 beta) sin(2 alpha)^2": lambda a, b: math.cos(2 * b) * math.sin(2 * a) ** 2,
    "sin(2 beta) sin(2 alpha)^2": lambda a, b: math.sin(2 * b) * math.sin(2 * a) ** 2,
    "cos(beta) sin(2 alpha)": lambda a, b: math.cos(b) * math.sin(2 * a),
    "sin(beta) sin(2 alpha)": lambda a, b: math.sin(b) * math.sin(2 * a),
    "cos(beta) sin(4 alpha)": lambda a, b: math.cos(b) * math.sin(4 * a),
    "sin(beta) sin(4 alpha)": lambda a, b: math.sin(b) * math.sin(4 * a),
}


@dataclass(frozen=True)
class AngularCoeff:
    """``a + b cos(4 alpha) + c cos(2 beta) sin(2 alpha)**2``.

    ``residual`` is the worst sample misfit when the value came from a
    decomposition; it takes no part in equality.
    """

    a: float
    b: float = 0.0
    c: float = 0.0
    residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise ValueError("angular coefficients must be finite")

    def __call__(self, alpha: float, beta: float) -> float:
        _, c4, s = _basis3(alpha, beta)
        return self.a + self.b * c4 + self.c * s

    @property
    def basis_violation(self) -> bool:
        return self.residual > BASIS_VIOLATION_TOL

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


def _solve(rows: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    if np.linalg.matrix_rank(rows, tol=1e-10) < rows.shape[1]:
        raise RankDeficientGridError(f"grid of {rows.shape[0]} samples does not determine {rows.shape[1]} basis weights")
    sol, *_ = np.linalg.lstsq(rows, y, rcond=None)
    return sol, float(np.max(np.abs(rows @ sol - y)))


def angular_decompose(samples: Iterable[tuple[float, float, float]]) -> AngularCoeff:
    """Least-squares fit of ``(alpha, beta, value)`` samples to the three-term basis."""
    s = list(samples)
    if len(s) < 3:
        raise RankDeficientGridError("at least three samples are needed")
    rows = np.array([_basis3(a, b) for a, b, _ in s])
    sol, res = _solve(rows, np.array([v for *_, v in s], dtype=float))
    return AngularCoeff(float(sol[0]), float(sol[1]), float(sol[2]), res)


def extended_decompose(samples: Iterable[tuple[float, float, float]]) -> tuple[dict[str, float], float]:
    """Fit to :data:`EXTENDED_BASIS`; needs a grid denser than the default one."""
    s = list(samples)
    rows = np.array([[f(a, b) for f in EXTENDED_BASIS.values()] for a, b, _ in s])
    sol, res = _solve(rows, np.array([v for *_, v in s], dtype=float))
    return dict(zip(EXTENDED_BASIS, map(float, sol))), res


@dataclass(frozen=True)
class FidelityPolynomial:
    """Second-order fidelity with angle-dependent coefficients."""

    experiment: str
    kind: str  # "7" or "1"
    terms: Mapping[str, AngularCoeff]

    def __post_init__(self):
        if self.kind not in ("7", "1"):
            raise ValueError("kind must be '7' or '1'")
        missing = set(MONOMIALS) - set(self.terms)
        if missing:
            raise ValueError(f"missing monomials {sorted(missing)}")

    def __getitem__(self, name: str) -> AngularCoeff:
        return self.terms[name]

    def at(self, alpha: float, beta: float) -> TruncatedPoly:
        return TruncatedPoly([self.terms[m](alpha, beta) for m in MONOMIALS])

    @property
    def max_residual(self) -> float:
        return max(t.residual for t in self.terms.values())

    @classmethod
    def from_samples(
        cls, experiment: str, kind: str, polys: Mapping[tuple[float, float], TruncatedPoly]
    ) -> "FidelityPolynomial":
        """Decompose per-angle polynomials, one least-squares fit per monomial."""
        items = list(polys.items())
        terms = {
            m: angular_decompose((a, b, p.coeffs[i]) for (a, b), p in items) for i, m in enumerate(MONOMIALS)
        }
        return cls(experiment, kind, terms)
