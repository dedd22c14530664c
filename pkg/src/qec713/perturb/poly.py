"""Polynomials in (px, py, pz) truncated at total degree two."""

from __future__ import annotations

from typing import Mapping

import numpy as np

__all__ = ["MONOMIALS", "TruncatedPoly", "poly_eval", "pair_index"]

MONOMIALS = ("1", "px", "py", "pz", "px^2", "px*py", "py^2", "px*pz", "py*pz", "pz^2")

# index of p_a p_b (a, b in 0..2) inside MONOMIALS
_PAIR = {(0, 0): 4, (0, 1): 5, (1, 1): 6, (0, 2): 7, (1, 2): 8, (2, 2): 9}
_PAIRS = tuple(_PAIR.items())


def pair_index(a: int, b: int) -> int:
    return _PAIR[(a, b) if a <= b else (b, a)]


def _quad_terms(p) -> np.ndarray:
    px, py, pz = p
    return np.array([1.0, px, py, pz, px * px, px * py, py * py, px * pz, py * pz, pz * pz])


class TruncatedPoly:
    """Coefficient vector over :data:`MONOMIALS`; products and quotients drop degree > 2."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = np.zeros(10) if coeffs is None else np.array(coeffs, dtype=float)
        if c.shape != (10,):
            raise ValueError("a truncated polynomial has exactly 10 coefficients")
        self.coeffs = c

    @classmethod
    def constant(cls, value: float) -> "TruncatedPoly":
        c = np.zeros(10)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, name: str) -> "TruncatedPoly":
        c = np.zeros(10)
        c[MONOMIALS.index(name)] = 1.0
        return cls(c)

    @classmethod
    def from_dict(cls, terms: Mapping[str, float]) -> "TruncatedPoly":
        c = np.zeros(10)
        for name, v in terms.items():
            c[MONOMIALS.index(name)] = v
        return cls(c)

    @classmethod
    def p0(cls) -> "TruncatedPoly":
        return cls([1, -1, -1, -1, 0, 0, 0, 0, 0, 0])

    def to_dict(self) -> dict[str, float]:
        return {m: float(v) for m, v in zip(MONOMIALS, self.coeffs)}

    def __getitem__(self, name: str) -> float:
        return float(self.coeffs[MONOMIALS.index(name)])

    @property
    def constant_term(self) -> float:
        return float(self.coeffs[0])

    @property
    def linear(self) -> np.ndarray:
        return self.coeffs[1:4].copy()

    @property
    def quadratic(self) -> np.ndarray:
        return self.coeffs[4:].copy()

    def _coerce(self, other) -> "TruncatedPoly":
        if isinstance(other, TruncatedPoly):
            return other
        if np.isscalar(other):
            return TruncatedPoly.constant(float(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPoly(self.coeffs + o.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(-self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPoly(self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        c = np.zeros(10)
        c[0] = a[0] * b[0]
        c[1:4] = a[0] * b[1:4] + a[1:4] * b[0]
        for (i, j), k in _PAIRS:
            cross = a[1 + i] * b[1 + j] + (a[1 + j] * b[1 + i] if i != j else 0.0)
            c[k] = a[0] * b[k] + a[k] * b[0] + cross
        return TruncatedPoly(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n, d = self.coeffs, o.coeffs
        if d[0] == 0:
            raise ZeroDivisionError("divisor has zero constant term")
        q = np.zeros(10)
        q[0] = n[0] / d[0]
        q[1:4] = (n[1:4] - q[0] * d[1:4]) / d[0]
        for (i, j), k in _PAIRS:
            cross = q[1 + i] * d[1 + j] + (q[1 + j] * d[1 + i] if i != j else 0.0)
            q[k] = (n[k] - q[0] * d[k] - cross) / d[0]
        return TruncatedPoly(q)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result, base = TruncatedPoly.constant(1.0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, probs) -> float:
        return poly_eval(self, probs)

    def isclose(self, other: "TruncatedPoly", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= atol)

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None  # mutable coefficient array

    def __repr__(self) -> str:
        terms = ", ".join(f"{m}: {v:.10g}" for m, v in zip(MONOMIALS, self.coeffs) if v != 0)
        return f"TruncatedPoly({{{terms}}})"


def poly_eval(p: TruncatedPoly, probs) -> float:
    """Evaluate at a :class:`~qec713.noise.PauliProbs` or a ``(px, py, pz)`` triple."""
    if hasattr(probs, "as_tuple"):
        probs = probs.as_tuple()
    return float(np.dot(p.coeffs, _quad_terms(probs)))
