"""Least-squares extraction of polynomial coefficients from a black-box fidelity.

The dense backend only gives numbers, so its expansion coefficients are
recovered by sampling a small stencil of probability triples near zero and
fitting a polynomial.  Coordinates are scaled by the stencil step before the
solve so the design matrix stays well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from ..perturb.poly import TruncatedPoly

__all__ = ["Stencil", "SingularStencilError", "default_stencil", "cubic_stencil", "fit_coefficients", "FitResult"]

Evaluator = Callable[[tuple[float, float, float]], float]


class SingularStencilError(ValueError):
    """The stencil does not determine every coefficient of the fit."""


@dataclass(frozen=True)
class Stencil:
    points: np.ndarray  # (m, 3) probability triples
    h: float
    degree: int = 2

    def __len__(self) -> int:
        return len(self.points)


def _exponents(degree: int) -> list[tuple[int, int, int]]:
    # Ordered so the first ten match perturb.poly.MONOMIALS.
    out = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    out += [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    if degree >= 3:
        out += [e for e in product(range(4), repeat=3) if sum(e) == 3]
    if degree > 3:
        raise ValueError("fits above degree three are not supported")
    return out[: {1: 4, 2: 10, 3: 20}[degree]]


def default_stencil(h: float = 5e-4) -> Stencil:
    """All ``p_i`` in ``{0, h, 2h}`` with at most two nonzero coordinates (19 points)."""
    pts = [k for k in product(range(3), repeat=3) if sum(1 for v in k if v) <= 2]
    return Stencil(np.array(pts, dtype=float) * h, h, 2)


def cubic_stencil(h: float = 1e-4) -> Stencil:
    """Principal lattice ``k_i >= 0, sum k_i <= 3`` (20 points) fitted with a cubic.

    The cubic absorbs third-order terms, so the returned quadratic part has
    bias of order ``h**2`` rather than ``h``.
    """
    pts = [k for k in product(range(4), repeat=3) if sum(k) <= 3]
    return Stencil(np.array(pts, dtype=float) * h, h, 3)


@dataclass(frozen=True)
class FitResult:
    poly: TruncatedPoly  # degree <= 2 part of the fit
    residual: float  # max |fit - sample| over the stencil
    cubic: np.ndarray | None  # third-order coefficients when fitted


def _design(points: np.ndarray, h: float, exps) -> np.ndarray:
    u = points / h
    return np.stack([np.prod(u ** np.array(e), axis=1) for e in exps], axis=1)


def fit_coefficients(
    evaluator: Evaluator,
    stencil: Stencil | None = None,
    *,
    full: bool = False,
) -> TruncatedPoly | FitResult:
    """Fit ``evaluator`` on ``stencil`` and return its second-order polynomial.

    With ``full=True`` a :class:`FitResult` carrying the residual is returned.
    """
    st = stencil or default_stencil()
    exps = _exponents(st.degree)
    a = _design(st.points, st.h, exps)
    if a.shape[0] < a.shape[1] or np.linalg.matrix_rank(a) < a.shape[1]:
        raise SingularStencilError(f"stencil of {len(st)} points cannot fit {a.shape[1]} coefficients")
    y = np.array([float(evaluator(tuple(p))) for p in st.points])
    # Centre on the origin sample so rounding of O(1) values is not scaled by 1/h**2.
    origin = np.flatnonzero(~np.any(st.points, axis=1))
    y0 = y[origin[0]] if origin.size else 0.0
    sol, *_ = np.linalg.lstsq(a, y - y0, rcond=None)
    residual = float(np.max(np.abs(a @ sol - (y - y0))))
    sol[0] += y0
    scale = np.array([st.h ** sum(e) for e in exps])
    coef = sol / scale
    quad = np.zeros(10)
    quad[: min(10, coef.size)] = coef[:10]
    poly = TruncatedPoly(quad)
    if not full:
        return poly
    return FitResult(poly, residual, coef[10:] if coef.size > 10 else None)
