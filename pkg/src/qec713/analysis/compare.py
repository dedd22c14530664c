"""Computed-versus-reference coefficient reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ..densmat import StatePrep
from ..perturb.backend import fidelity_polynomial
from ..perturb.poly import MONOMIALS
from ..steane.experiments import ExperimentId
from ..steane.library import steane_encoder
from .angular import DEFAULT_GRID, FidelityPolynomial
from .reference import ReferenceTable

__all__ = ["MonomialDiff", "ComparisonReport", "compare_reference", "computed_polynomial", "circuit_note"]


def computed_polynomial(
    experiment: ExperimentId | str,
    kind: str,
    *,
    grid: Iterable[tuple[float, float]] = DEFAULT_GRID,
    qec_mode: str = "postselect",
    encoder: str | Path | None = None,
    shor_path: str | Path | None = None,
) -> FidelityPolynomial:
    """Perturbative polynomials on ``grid`` decomposed into the angular basis."""
    exp = ExperimentId.from_key(experiment) if isinstance(experiment, str) else experiment
    kind = str(kind)
    if kind not in ("7", "1"):
        raise ValueError("kind must be '7' or '1'")
    polys = {}
    for a, b in grid:
        f7, f1 = fidelity_polynomial(exp, StatePrep(a, b), qec_mode=qec_mode, encoder=encoder, shor_path=shor_path)
        polys[(a, b)] = f7 if kind == "7" else f1
    return FidelityPolynomial.from_samples(exp.key, kind, polys)


def circuit_note(encoder: str | Path | None = None, shor_path: str | Path | None = None, qec_mode: str = "postselect") -> str:
    enc = steane_encoder(encoder)
    gates = "; ".join(ins.to_text() for ins in enc.instructions)
    shor = "shipped shor_prep.sqc (fan-out 1->4, 1->2, 1->3)" if shor_path is None else f"shor prep {shor_path}"
    src = "shipped encoder.sqc" if encoder is None else f"encoder {encoder}"
    return f"{src}: {gates} | {shor} | extraction order b1 b1 b2 b2 b3 b3 p1 p1 p2 p2 p3 p3 | perfect QEC mode {qec_mode}"


@dataclass(frozen=True)
class MonomialDiff:
    name: str
    a: float
    b: float
    c: float
    ref_a: float
    ref_b: float
    ref_c: float
    abs_diff: float
    advisory: bool = False
    interpreted_abs_diff: float | None = None

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("name", "a", "b", "c", "ref_a", "ref_b", "ref_c", "abs_diff")}
        d["advisory"] = self.advisory
        if self.advisory:
            d["interpreted_abs_diff"] = self.interpreted_abs_diff
        return d


@dataclass(frozen=True)
class ComparisonReport:
    """Per-monomial diffs; advisory rows are reported but do not count towards ``max_abs_diff``."""

    experiment: str
    kind: str
    label: str
    monomials: tuple[MonomialDiff, ...]
    max_abs_diff: float
    tolerance: float
    circuit_note: str

    @property
    def matched(self) -> bool:
        return self.max_abs_diff <= self.tolerance

    @property
    def advisory(self) -> tuple[MonomialDiff, ...]:
        return tuple(m for m in self.monomials if m.advisory)

    def row(self, name: str) -> MonomialDiff:
        return next(m for m in self.monomials if m.name == name)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "kind": self.kind,
            "label": self.label,
            "monomials": [m.to_dict() for m in self.monomials],
            "max_abs_diff": self.max_abs_diff,
            "tolerance": self.tolerance,
            "matched": self.matched,
            "advisory": [m.name for m in self.advisory],
            "circuit_note": self.circuit_note,
        }

    def to_json(self, digits: int = 12) -> str:
        def fmt(v):
            if isinstance(v, float):
                return float(f"{v:.{digits}g}")
            if isinstance(v, dict):
                return {k: fmt(x) for k, x in v.items()}
            if isinstance(v, list):
                return [fmt(x) for x in v]
            return v

        return json.dumps(fmt(self.to_dict()), indent=2)


def _diff(x: tuple[float, ...], y: tuple[float, ...]) -> float:
    return max(abs(p - q) for p, q in zip(x, y))


def compare_reference(
    computed: FidelityPolynomial,
    table: ReferenceTable | None = None,
    tolerance: float = 1e-6,
    *,
    note: str = "",
) -> ComparisonReport:
    """Diff every monomial against the matching reference entry; never raises on mismatch."""
    if not math.isfinite(tolerance) or tolerance < 0:
        raise ValueError("tolerance must be a finite non-negative number")
    table = table or ReferenceTable.load()
    ref = table.get(computed.experiment, computed.kind)
    rows, worst = [], 0.0
    for m in MONOMIALS:
        got = computed[m].as_tuple()
        lit = tuple(float(v) for v in ref.terms[m])
        d = _diff(got, lit)
        if m in ref.advisory:
            alt = tuple(float(v) for v in ref.advisory[m].interpreted)
            rows.append(MonomialDiff(m, *got, *lit, d, True, _diff(got, alt)))
        else:
            rows.append(MonomialDiff(m, *got, *lit, d))
            worst = max(worst, d)
    return ComparisonReport(computed.experiment, computed.kind, ref.label, tuple(rows), worst, tolerance, note)
