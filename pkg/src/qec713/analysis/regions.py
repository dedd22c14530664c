"""Where in (p_x, p_z) space one experiment beats another."""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple

import numpy as np

from ..densmat import StatePrep
from ..noise import PauliProbs
from ..perturb.backend import fidelity_polynomial
from ..perturb.poly import TruncatedPoly, poly_eval
from ..steane.experiments import ExperimentId, run_experiment
from .reference import ReferenceTable

__all__ = ["RegionRow", "region_scan", "SOURCES"]

SOURCES = ("perturb", "dense", "reference")


class RegionRow(NamedTuple):
    px: float
    pz: float
    f_before: float
    f_after: float
    improved: bool


def _truncate(p: TruncatedPoly, order: int) -> TruncatedPoly:
    c = p.coeffs.copy()
    if order < 2:
        c[4:] = 0.0
    if order < 1:
        c[1:4] = 0.0
    return TruncatedPoly(c)


def _f7(key: str, prep: StatePrep, source: str, order: int, **kw) -> Callable[[PauliProbs], float]:
    if source == "dense":
        return lambda probs: run_experiment(key, prep, probs, **kw).f7
    if source == "perturb":
        poly = fidelity_polynomial(key, prep, **kw).f7
    else:
        poly = ReferenceTable.load().get(key, "7").polynomial().at(prep.alpha, prep.beta)
    poly = _truncate(poly, order)
    return lambda probs: poly_eval(poly, probs)


def region_scan(
    pair: tuple[ExperimentId | str, ExperimentId | str],
    prep: StatePrep,
    px_values: Iterable[float],
    pz_values: Iterable[float],
    py: float = 0.0,
    *,
    source: str = "perturb",
    order: int = 2,
    **kwargs,
) -> list[RegionRow]:
    """7-qubit fidelity before and after, row-major with ``px`` outermost.

    ``source`` picks the dense simulator, the perturbative polynomial or the
    transcribed reference; ``order`` truncates the two polynomial sources.
    """
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}")
    keys = [p if isinstance(p, str) else p.key for p in pair]
    before, after = (_f7(ExperimentId.from_key(k).key, prep, source, order, **kwargs) for k in keys)
    rows = []
    for px in np.asarray(list(px_values), dtype=float):
        for pz in np.asarray(list(pz_values), dtype=float):
            probs = PauliProbs(float(px), float(py), float(pz))
            fb, fa = before(probs), after(probs)
            rows.append(RegionRow(float(px), float(pz), fb, fa, bool(fa > fb)))
    return rows
