"""Finitely supported tables of absolute and log GW invariants.

Absolute entries are keyed by ``(class, genus, labels)`` where ``labels`` is
the sorted tuple of cohomology basis labels inserted.  Lookups extend the
stored data by

* the divisor axiom ``Psi_(A,g,m+1)(alpha, ...) = alpha(A) Psi_(A,g,m)(...)``
  for ``A != 0``, in both directions (a stored entry with nonzero divisor
  factors also determines its reduced value),
* the fundamental class axiom (a unit insertion kills ``A != 0``),
* dimension counting against the virtual dimension,
* the multiple-cover value ``n / k^3`` for ``A = k * Gamma`` in genus 0.

Anything else evaluates to 0 and is reported through the ``absent`` set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .cohomology import UNIT, CohClass, FlopLocusData, ThreefoldModel
from .lattice import as_class, multiple_of, pair

__all__ = [
    "FlopLocusData", "GWTable", "LogGWTable", "divisor_reduce", "lookup_extended",
    "multiple_cover_value", "canonical_labels",
]


def canonical_labels(model: ThreefoldModel, labels: Iterable[str]) -> tuple[str, ...]:
    order = {l: i for i, l in enumerate(model.labels())}
    labels = tuple(labels)
    for l in labels:
        if l not in order:
            raise KeyError(f"{model.name}: unknown cohomology label {l!r}")
    return tuple(sorted(labels, key=order.__getitem__))


def _divisor_split(model, labels):
    D = tuple(l for l in labels if model.label_degree(l) == 2)
    R = tuple(l for l in labels if model.label_degree(l) != 2)
    return D, R


def _divisor_factor(model, D, A) -> Fraction:
    f = Fraction(1)
    for l in D:
        f *= pair(model.coh(l).coords, A)
    return f


@dataclass(frozen=True)
class GWTable:
    model: ThreefoldModel
    entries: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        model = self.model
        clean = {}
        for (A, g, labels), v in self.entries.items():
            A = model.lattice.check(A)
            if g < 0:
                raise ValueError("genus must be non-negative")
            labels = canonical_labels(model, labels)
            if not any(A) and g == 0 and len(labels) < 3:
                raise ValueError(f"{model.name}: A=0 genus-0 entries need at least 3 insertions")
            v = Fraction(v)
            key = (A, g, labels)
            if key in clean and clean[key] != v:
                raise ValueError(f"{model.name}: duplicate entry {key}")
            if v:
                deg = sum(model.label_degree(l) for l in labels)
                if deg != model.vdim(A, g, len(labels)):
                    raise ValueError(
                        f"{model.name}: entry {key} has insertion degree {deg} but the "
                        f"moduli space has dimension {model.vdim(A, g, len(labels))}")
            clean[key] = v
        object.__setattr__(self, "entries", clean)
        base = {}
        for (A, g, labels), v in clean.items():
            if not any(A):
                continue
            D, R = _divisor_split(model, labels)
            f = _divisor_factor(model, D, A)
            if not f:
                continue
            k = (A, g, R)
            b = v / f
            if k in base and base[k] != b:
                raise ValueError(f"{model.name}: entries at class {A}, genus {g} "
                                 f"are inconsistent with the divisor axiom")
            base[k] = b
        object.__setattr__(self, "_base", base)

    def support(self, genus: int | None = None) -> set:
        return {A for (A, g, _), v in self.entries.items() if v and (genus is None or g == genus)}

    def get(self, A, g, labels) -> Fraction | None:
        return self.entries.get((as_class(A), g, canonical_labels(self.model, labels)))

    def with_entries(self, extra: Mapping) -> "GWTable":
        d = dict(self.entries)
        d.update(extra)
        return GWTable(self.model, d)


def multiple_cover_value(d: FlopLocusData, k: int) -> Fraction:
    """Genus-0 contribution of k-fold covers of the curves in a flop locus."""
    if k <= 0:
        raise ValueError("cover degree must be positive")
    return Fraction(d.count, k ** 3)


def _as_classes(model, insertions) -> list[CohClass]:
    out = []
    for a in insertions:
        out.append(model.coh(a) if isinstance(a, str) else a)
        model.check_class(out[-1])
    return out


def _basis_value(t: GWTable, A, g, labels, absent) -> Fraction:
    model = t.model
    labels = canonical_labels(model, labels)
    stored = t.entries.get((A, g, labels))
    if stored is not None:
        return stored
    nonzero = any(A)
    if nonzero and UNIT in labels:
        return Fraction(0)
    deg = sum(model.label_degree(l) for l in labels)
    if deg != model.vdim(A, g, len(labels)):
        return Fraction(0)
    if nonzero:
        D, R = _divisor_split(model, labels)
        f = _divisor_factor(model, D, A)
        base = t._base.get((A, g, R))
        if base is not None:
            return f * base
        if g == 0 and not R:
            for locus in model.flop_loci:
                k = multiple_of(A, locus.gamma)
                if k is not None:
                    return f * multiple_cover_value(locus, k)
    if absent is not None:
        absent.add((A, g, labels))
    return Fraction(0)


def lookup_extended(t: GWTable, A, g: int, insertions: Sequence, absent: set | None = None) -> Fraction:
    """Value of ``Psi_(A, g, m)(insertions)``; insertions are labels or
    :class:`CohClass` values and enter multilinearly."""
    model = t.model
    A = model.lattice.check(A)
    expanded = [model.expand(a) for a in _as_classes(model, insertions)]
    total = Fraction(0)
    for combo in product(*expanded):
        coef = Fraction(1)
        for _, c in combo:
            coef *= c
        total += coef * _basis_value(t, A, g, [l for l, _ in combo], absent)
    return total


def divisor_reduce(t: GWTable, A, g: int, insertions: Sequence, absent: set | None = None) -> Fraction:
    """Strip every degree-2 insertion with the divisor axiom."""
    model = t.model
    A = model.lattice.check(A)
    if not any(A):
        raise ValueError("the divisor axiom needs A != 0")
    ins = _as_classes(model, insertions)
    divs = [a for a in ins if a.degree == 2]
    if not divs:
        raise ValueError("no degree-2 insertion to remove")
    rest = [a for a in ins if a.degree != 2]
    f = Fraction(1)
    for a in divs:
        f *= pair(a.coords, A)
    if not f:
        return Fraction(0)
    return f * lookup_extended(t, A, g, rest, absent)


# log invariants -----------------------------------------------------------

@dataclass(frozen=True)
class LogGWTable:
    """Log invariants of a pair ``(side, Z)``.

    Keys are ``(class, genus, labels, ends)`` with ``labels`` the sorted
    interior insertions and ``ends`` the sorted tuple of
    ``(contact order, Z-basis index)`` pairs.  Every key satisfies
    ``sum of contact orders == z_star(class)``.
    """
    pair_name: str
    model: ThreefoldModel
    z_star: tuple[int, ...]
    entries: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "z_star", as_class(self.z_star))
        if len(self.z_star) != self.model.h2_rank:
            raise ValueError(f"{self.pair_name}: Z pairing has the wrong length")
        clean = {}
        for key, v in self.entries.items():
            k = self.key(*key)
            clean[k] = Fraction(v)
        object.__setattr__(self, "entries", clean)

    def key(self, A, g, labels, ends):
        A = self.model.lattice.check(A)
        ends = tuple(sorted((int(k), int(b)) for k, b in ends))
        if any(k <= 0 for k, _ in ends):
            raise ValueError(f"{self.pair_name}: contact orders must be positive")
        if sum(k for k, _ in ends) != pair(self.z_star, A):
            raise ValueError(f"{self.pair_name}: tangency {[k for k, _ in ends]} does not sum "
                             f"to Z.A = {pair(self.z_star, A)} for class {A}")
        if g < 0:
            raise ValueError("genus must be non-negative")
        return (A, g, canonical_labels(self.model, labels), ends)

    def lookup(self, A, g, labels, ends, absent: set | None = None) -> Fraction:
        k = self.key(A, g, labels, ends)
        v = self.entries.get(k)
        if v is None:
            if absent is not None:
                absent.add((self.pair_name,) + k)
            return Fraction(0)
        return v
