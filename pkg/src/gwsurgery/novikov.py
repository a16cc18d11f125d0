"""Formal series in Novikov variables ``q^A`` with exact rational
coefficients.

A series is a finite polynomial part plus a finite set of geometric atoms
``c * q^G / (1 - q^G)``.  Exponents may be negative.  Two series are
compared up to analytic continuation of the atoms, which is the only
rational-function identity needed here:

    q^-G / (1 - q^-G) = -1 - q^G / (1 - q^G)

Text form: ``3*q^[1,0] - q^[0,2] + 1/2*G([0,1])``; the constant term is a
bare rational.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .lattice import LatticeMap, add, apply_map, as_class, pair, rational_inverse, scale


@dataclass(frozen=True)
class Truncation:
    """Keep only exponents whose area is at most ``bound``."""
    area: tuple[Fraction, ...]
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "area", tuple(Fraction(a) for a in self.area))
        object.__setattr__(self, "bound", Fraction(self.bound))

    def keeps(self, a) -> bool:
        return pair(self.area, a) <= self.bound


def _clean(d: Mapping) -> dict:
    return {as_class(k): Fraction(v) for k, v in d.items() if v}


@dataclass(frozen=True)
class NovikovSeries:
    rank: int
    poly: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)
    atoms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)
    truncation: Truncation | None = None

    def __post_init__(self):
        poly = _clean(self.poly)
        atoms = _clean(self.atoms)
        for k in list(poly) + list(atoms):
            if len(k) != self.rank:
                raise ValueError(f"exponent {k} does not have length {self.rank}")
        for g in atoms:
            if not any(g):
                raise ValueError("geometric atom needs a nonzero class")
        if self.truncation is not None:
            if len(self.truncation.area) != self.rank:
                raise ValueError("truncation area has the wrong length")
            poly = {k: v for k, v in poly.items() if self.truncation.keeps(k)}
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "atoms", atoms)

    # construction helpers
    @classmethod
    def zero(cls, rank, truncation=None) -> "NovikovSeries":
        return cls(rank, {}, {}, truncation)

    @classmethod
    def constant(cls, rank, c, truncation=None) -> "NovikovSeries":
        return cls(rank, {(0,) * rank: c}, {}, truncation)

    @classmethod
    def monomial(cls, A, c=1, truncation=None) -> "NovikovSeries":
        A = as_class(A)
        return cls(len(A), {A: c}, {}, truncation)

    @classmethod
    def atom(cls, gamma, c=1, truncation=None) -> "NovikovSeries":
        gamma = as_class(gamma)
        return cls(len(gamma), {}, {gamma: c}, truncation)

    def with_truncation(self, truncation: Truncation | None) -> "NovikovSeries":
        return NovikovSeries(self.rank, self.poly, self.atoms, truncation)

    def is_zero(self) -> bool:
        return not self.poly and not self.atoms

    def coefficient(self, A) -> Fraction:
        return self.poly.get(as_class(A), Fraction(0))

    def _check(self, other: "NovikovSeries"):
        if self.rank != other.rank:
            raise ValueError("series live on different lattices")

    def __add__(self, other):
        if not isinstance(other, NovikovSeries):
            other = NovikovSeries.constant(self.rank, other)
        self._check(other)
        poly = dict(self.poly)
        for k, v in other.poly.items():
            poly[k] = poly.get(k, 0) + v
        atoms = dict(self.atoms)
        for k, v in other.atoms.items():
            atoms[k] = atoms.get(k, 0) + v
        return NovikovSeries(self.rank, poly, atoms, _merge_trunc(self.truncation, other.truncation))

    __radd__ = __add__

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        if not isinstance(other, NovikovSeries):
            other = NovikovSeries.constant(self.rank, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, c) -> "NovikovSeries":
        c = Fraction(c)
        return NovikovSeries(self.rank, {k: c * v for k, v in self.poly.items()},
                             {k: c * v for k, v in self.atoms.items()}, self.truncation)

    def __mul__(self, other):
        if isinstance(other, NovikovSeries):
            return nv_mul(self, other)
        return self.scaled(other)

    def __rmul__(self, c):
        return self.scaled(c)

    def __str__(self):
        return render(self)


def _merge_trunc(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    if a.area != b.area:
        raise ValueError("cannot combine series truncated by different area functionals")
    return a if a.bound <= b.bound else b


def expand_atom(gamma, c, truncation: Truncation) -> dict:
    """Terms ``c q^{k gamma}``, k >= 1, inside the truncation window."""
    a = pair(truncation.area, gamma)
    if a <= 0:
        raise ValueError(f"atom G({list(gamma)}) has non-positive area; it cannot be truncated")
    out = {}
    k = 1
    while k * a <= truncation.bound:
        out[scale(k, gamma)] = Fraction(c)
        k += 1
    return out


def nv_expand(F: NovikovSeries, truncation: Truncation | None = None) -> NovikovSeries:
    """Replace every atom by its truncated power series."""
    t = truncation or F.truncation
    if t is None:
        raise ValueError("expansion needs a truncation")
    poly = {k: v for k, v in F.poly.items() if t.keeps(k)}
    for g, c in F.atoms.items():
        for k, v in expand_atom(g, c, t).items():
            poly[k] = poly.get(k, 0) + v
    return NovikovSeries(F.rank, poly, {}, t)


def nv_mul(F: NovikovSeries, G: NovikovSeries, truncation: Truncation | None = None) -> NovikovSeries:
    F._check(G)
    t = truncation or _merge_trunc(F.truncation, G.truncation)
    zero = (0,) * F.rank
    if F.atoms or G.atoms:
        # atoms times a constant stay closed-form
        for P, Q in ((F, G), (G, F)):
            if not Q.atoms and set(Q.poly) <= {zero} and t is None:
                c = Q.poly.get(zero, Fraction(0))
                return P.scaled(c)
        if t is None:
            raise ValueError("product involving geometric atoms needs a truncation")
        F, G = nv_expand(F, t), nv_expand(G, t)
    poly = {}
    for a, x in F.poly.items():
        for b, y in G.poly.items():
            k = add(a, b)
            if t is not None and not t.keeps(k):
                continue
            poly[k] = poly.get(k, 0) + x * y
    return NovikovSeries(F.rank, poly, {}, t)


def nv_substitute(F: NovikovSeries, m: LatticeMap) -> NovikovSeries:
    """Change of variables ``q^A -> q^{m(A)}``."""
    if m.source.rank != F.rank:
        raise ValueError("map source does not match the series lattice")
    poly, atoms = {}, {}
    for k, v in F.poly.items():
        b = apply_map(m, k)
        poly[b] = poly.get(b, 0) + v
    for g, c in F.atoms.items():
        b = apply_map(m, g)
        if not any(b):
            raise ValueError(f"atom class {g} is killed by the substitution")
        atoms[b] = atoms.get(b, 0) + c
    t = None
    if F.truncation is not None and m.kind == "iso":
        inv = rational_inverse(m.matrix)
        area = tuple(sum((F.truncation.area[i] * inv[i][j] for i in range(F.rank)), Fraction(0))
                     for j in range(m.target.rank))
        t = Truncation(area, F.truncation.bound)
    return NovikovSeries(m.target.rank, poly, atoms, t)


def nv_closed_form(F: NovikovSeries, gamma) -> tuple[NovikovSeries, bool]:
    """Fold the terms along ``k*gamma`` (k >= 1, inside the truncation) into a
    single geometric atom when their coefficients are constant.

    Returns ``(series, recognized)``; the series is unchanged when the
    coefficients are not constant.
    """
    gamma = as_class(gamma)
    t = F.truncation
    if t is None:
        raise ValueError("closed-form recognition needs a truncated series")
    window = expand_atom(gamma, 1, t)
    if not window:
        return F, False
    coeffs = {F.poly.get(k, Fraction(0)) for k in window}
    if len(coeffs) != 1:
        return F, False
    c = coeffs.pop()
    poly = {k: v for k, v in F.poly.items() if k not in window}
    atoms = dict(F.atoms)
    atoms[gamma] = atoms.get(gamma, 0) + c
    return NovikovSeries(F.rank, poly, atoms, t), True


def _positive(gamma, area=None) -> bool:
    if area is not None:
        a = pair(area, gamma)
        if a:
            return a > 0
    for x in gamma:
        if x:
            return x > 0
    raise ValueError("zero class")


def ac_normal_form(F: NovikovSeries, area=None) -> NovikovSeries:
    """Rewrite every atom so its class is positive, using
    ``G(-g) = -1 - G(g)``.  Positivity is by ``area`` when given and nonzero,
    else by the sign of the first nonzero coordinate."""
    zero = (0,) * F.rank
    poly = dict(F.poly)
    atoms = {}
    for g, c in F.atoms.items():
        if not _positive(g, area):
            g = tuple(-x for x in g)
            poly[zero] = poly.get(zero, 0) - c
            c = -c
        atoms[g] = atoms.get(g, 0) + c
    return NovikovSeries(F.rank, poly, atoms, F.truncation)


def nv_ac_equal(F: NovikovSeries, G: NovikovSeries) -> bool:
    """Equality up to analytic continuation of geometric atoms.

    Without truncation the comparison is exact on normal forms.  If either
    side is truncated, atoms with positive area are expanded and the
    polynomial parts are compared inside the window.
    """
    F._check(G)
    t = _merge_trunc(F.truncation, G.truncation)
    D = ac_normal_form(F - G, t.area if t else None)
    if t is None:
        return D.is_zero()
    symbolic = {g: c for g, c in D.atoms.items() if pair(t.area, g) <= 0}
    if symbolic:
        return False
    return nv_expand(D, t).is_zero()


# text form ---------------------------------------------------------------

def _fmt_class(a) -> str:
    return "[" + ",".join(str(x) for x in a) + "]"


def render(F: NovikovSeries) -> str:
    zero = (0,) * F.rank
    terms = []
    for k in sorted(F.poly):
        v = F.poly[k]
        terms.append((v, None if k == zero else "q^" + _fmt_class(k)))
    for g in sorted(F.atoms):
        terms.append((F.atoms[g], "G(" + _fmt_class(g) + ")"))
    if not terms:
        return "0"
    out = []
    for i, (c, body) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if body is None:
            text = str(c)
        elif c == 1:
            text = body
        else:
            text = f"{c}*{body}"
        if i == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


_TERM = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?)?"
    r"(?:q\^\[(?P<q>[^\]]*)\]|G\(\s*\[(?P<g>[^\]]*)\]\s*\))?$")


def _split_terms(text: str):
    depth, cur, sign, out = 0, [], 1, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if depth == 0 and ch in "+-":
            body = "".join(cur).strip()
            if body:
                out.append((sign, body))
                sign = 1
            sign = sign * (-1 if ch == "-" else 1)
            cur = []
            continue
        cur.append(ch)
    body = "".join(cur).strip()
    if body:
        out.append((sign, body))
    elif cur or text.strip().endswith(("+", "-")):
        raise ValueError(f"dangling sign in series {text!r}")
    return out


def parse(text: str, rank: int | None = None) -> NovikovSeries:
    """Inverse of :func:`render`."""
    text = text.strip()
    items = []
    for sign, body in _split_terms(text):
        m = _TERM.match(body)
        if not m or (m.group("coef") is None and m.group("q") is None and m.group("g") is None):
            raise ValueError(f"cannot parse series term {body!r}")
        c = sign * Fraction(m.group("coef") or 1)
        if m.group("q") is not None:
            items.append(("q", _parse_class(m.group("q")), c))
        elif m.group("g") is not None:
            items.append(("G", _parse_class(m.group("g")), c))
        else:
            items.append(("c", None, c))
    ranks = {len(a) for kind, a, _ in items if a is not None}
    if rank is not None:
        ranks.add(rank)
    if len(ranks) != 1:
        raise ValueError("cannot determine a single lattice rank for the series")
    r = ranks.pop()
    F = NovikovSeries.zero(r)
    for kind, a, c in items:
        if kind == "q":
            F = F + NovikovSeries.monomial(a, c)
        elif kind == "G":
            F = F + NovikovSeries.atom(a, c)
        else:
            F = F + NovikovSeries.constant(r, c)
    return F


def _parse_class(body: str):
    body = body.strip()
    if not body:
        raise ValueError("empty class")
    return tuple(int(x) for x in body.split(","))
