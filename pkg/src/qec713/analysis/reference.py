"""Transcribed reference fidelities with exact rational coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from ..perturb.poly import MONOMIALS
from .angular import AngularCoeff, FidelityPolynomial

__all__ = ["ReferenceEntry", "ReferenceTable", "MissingReferenceError", "Advisory"]

Triple = tuple[Fraction, Fraction, Fraction]


class MissingReferenceError(KeyError):
    pass


@dataclass(frozen=True)
class Advisory:
    """A coefficient whose printed form is ambiguous; both readings are kept."""

    verbatim: str
    literal: Triple
    interpreted: Triple
    note: str


@dataclass(frozen=True)
class ReferenceEntry:
    label: str
    experiment: str
    kind: str
    source_label: str
    terms: Mapping[str, Triple]
    advisory: Mapping[str, Advisory] = field(default_factory=dict)

    def polynomial(self, reading: str = "literal") -> FidelityPolynomial:
        """Float view; ``reading="interpreted"`` swaps in the interpreted advisory values."""
        if reading not in ("literal", "interpreted"):
            raise ValueError("reading must be 'literal' or 'interpreted'")
        terms = {}
        for m in MONOMIALS:
            t = self.terms[m]
            if reading == "interpreted" and m in self.advisory:
                t = self.advisory[m].interpreted
            terms[m] = AngularCoeff(*(float(v) for v in t))
        return FidelityPolynomial(self.experiment, self.kind, terms)


def _triple(v) -> Triple:
    a, b, c = (Fraction(x) for x in v)
    return (a, b, c)


class ReferenceTable:
    """Lookup by reference label or by ``(experiment, kind)``."""

    def __init__(self, entries: list[ReferenceEntry]):
        self._by_label = {e.label: e for e in entries}
        self._by_key = {(e.experiment, e.kind): e for e in entries}

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ReferenceTable":
        if path is None:
            text = resources.files("qec713.analysis").joinpath("data/reference.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        raw = json.loads(text)
        if tuple(raw["monomials"]) != MONOMIALS:
            raise ValueError("reference table uses a different monomial order")
        entries = []
        for e in raw["entries"]:
            adv = {
                m: Advisory(a["verbatim"], _triple(a["literal"]), _triple(a["interpreted"]), a["note"])
                for m, a in e.get("advisory", {}).items()
            }
            terms = {m: _triple(e["terms"][m]) for m in MONOMIALS}
            entries.append(ReferenceEntry(e["label"], e["experiment"], e["kind"], e["source_label"], terms, adv))
        return cls(entries)

    def __len__(self) -> int:
        return len(self._by_label)

    def __iter__(self) -> Iterator[ReferenceEntry]:
        return iter(self._by_label.values())

    @property
    def labels(self) -> list[str]:
        return list(self._by_label)

    def by_label(self, label: str) -> ReferenceEntry:
        try:
            return self._by_label[label.upper()]
        except KeyError:
            raise MissingReferenceError(f"no reference entry {label!r}") from None

    def get(self, experiment: str, kind: str) -> ReferenceEntry:
        try:
            return self._by_key[(experiment, str(kind))]
        except KeyError:
            raise MissingReferenceError(f"no reference entry for {experiment} ({kind}-qubit)") from None
