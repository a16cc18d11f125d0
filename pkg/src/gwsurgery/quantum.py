"""Genus-0 quantum 3-point functions as Novikov series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable

from .cohomology import CohClass, ThreefoldModel, cup_product
from .lattice import multiple_of, pair, scale
from .novikov import NovikovSeries, Truncation, nv_closed_form
from .tables import GWTable, lookup_extended


@dataclass(frozen=True)
class QuantumContext:
    model: ThreefoldModel
    table: GWTable
    area_bound: Fraction
    w: CohClass | None = None
    w_order: int = 0

    def __post_init__(self):
        object.__setattr__(self, "area_bound", Fraction(self.area_bound))
        if self.area_bound <= 0:
            raise ValueError("area bound must be positive")
        if self.w_order < 0:
            raise ValueError("w_order must be non-negative")
        if self.w is not None:
            self.model.check_class(self.w)
        if self.table.model is not self.model and self.table.model != self.model:
            raise ValueError("table belongs to a different model")

    @property
    def truncation(self) -> Truncation:
        return Truncation(self.model.area, self.area_bound)


def on_locus(model: ThreefoldModel, A) -> bool:
    return any(multiple_of(A, l.gamma) is not None for l in model.flop_loci)


def window(ctx: QuantumContext) -> list[tuple[int, ...]]:
    """Nonzero genus-0 support classes inside the area bound, off the flop
    loci (those are carried by geometric atoms)."""
    m = ctx.model
    return sorted(A for A in ctx.table.support(genus=0)
                  if any(A) and pair(m.area, A) <= ctx.area_bound and not on_locus(m, A))


def coefficient(ctx: QuantumContext, A, insertions, absent=None) -> Fraction:
    """``sum_j 1/j! Psi_(A,0,3+j)(a1, a2, a3, w, ..., w)``."""
    total = Fraction(0)
    J = ctx.w_order if ctx.w is not None else 0
    for j in range(J + 1):
        v = lookup_extended(ctx.table, A, 0, list(insertions) + [ctx.w] * j, absent)
        total += v / factorial(j)
    return total


def locus_terms(ctx: QuantumContext, locus, insertions, depth=None, absent=None):
    """Coefficients of ``q^{k Gamma}``, k = 1..depth.  The default depth is
    the truncation window, but never fewer than 3 terms so that a constant
    tail is actually observed."""
    m = ctx.model
    a = pair(m.area, locus.gamma)
    if depth is None:
        depth = max(3, int(ctx.area_bound // a))
    return [(k, coefficient(ctx, scale(k, locus.gamma), insertions, absent))
            for k in range(1, depth + 1)]


def three_point(ctx: QuantumContext, a1: CohClass, a2: CohClass, a3: CohClass,
                classes: Iterable | None = None, absent: set | None = None,
                tails: bool = True) -> NovikovSeries:
    """Quantum 3-point function ``Psi_w(a1, a2, a3)``.

    The constant term is the cup product.  Classes ``A`` range over
    ``classes`` when given (any class set off the flop loci), else over the
    table support inside the area bound.  Multiple-cover tails along each
    flop locus are folded into geometric atoms when their coefficients are
    constant in k; otherwise the tail is kept as polynomial terms inside the
    truncation window.
    """
    m = ctx.model
    ins = (a1, a2, a3)
    for a in ins:
        m.check_class(a)
    if ctx.w is not None and ctx.w.degree % 2:
        raise ValueError("w must have even degree")
    rank = m.h2_rank
    F = NovikovSeries.constant(rank, cup_product(m, a1, a2, a3))
    if classes is None:
        classes = window(ctx)
    poly = {}
    for A in classes:
        A = m.lattice.check(A)
        if not any(A) or on_locus(m, A):
            continue
        c = coefficient(ctx, A, ins, absent)
        if c:
            poly[A] = c
    F = F + NovikovSeries(rank, poly)
    for locus in (m.flop_loci if tails else ()):
        terms = locus_terms(ctx, locus, ins, absent=absent)
        depth = len(terms)
        t = Truncation(m.area, pair(m.area, scale(depth, locus.gamma)))
        tail = NovikovSeries(rank, {scale(k, locus.gamma): c for k, c in terms}, {}, t)
        folded, ok = nv_closed_form(tail, locus.gamma)
        if ok:
            F = F + NovikovSeries(rank, {}, folded.atoms)
        else:
            kept = {A: c for A, c in tail.poly.items() if pair(m.area, A) <= ctx.area_bound}
            F = F + NovikovSeries(rank, kept)
    return F
