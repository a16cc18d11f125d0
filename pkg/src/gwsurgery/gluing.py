"""Splitting types across a symplectic cut and the gluing sum.

A splitting type is a finite bipartite multigraph: plus-side and minus-side
components (class, genus, marked points, contact orders) joined by edges,
one per matched pair of ends, each carrying its contact order ``k``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement, permutations, product
from typing import Mapping, Sequence

import numpy as np

from .cohomology import ThreefoldModel
from .lattice import ClassCoset, LatticeMap, add, apply_map, as_class, pair, rational_inverse
from .tables import LogGWTable

SIDES = ("plus", "minus")


@dataclass(frozen=True)
class ZModel:
    basis: tuple[str, ...]
    pairing: tuple[tuple[Fraction, ...], ...]
    inverse_pairing: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = len(self.basis)
        P = tuple(tuple(Fraction(x) for x in row) for row in self.pairing)
        Q = tuple(tuple(Fraction(x) for x in row) for row in self.inverse_pairing)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "pairing", P)
        object.__setattr__(self, "inverse_pairing", Q)
        if r == 0:
            raise ValueError("Z basis is empty")
        for name, M in (("pairing", P), ("inverse_pairing", Q)):
            if len(M) != r or any(len(row) != r for row in M):
                raise ValueError(f"{name} must be {r}x{r}")
        for i in range(r):
            for j in range(r):
                s = sum(P[i][l] * Q[l][j] for l in range(r))
                if s != (i == j):
                    raise ValueError("inverse_pairing is not the inverse of pairing")

    @classmethod
    def from_pairing(cls, basis, pairing) -> "ZModel":
        return cls(tuple(basis), pairing, rational_inverse(pairing))

    @property
    def rank(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class CutModel:
    """The two cut pieces with their divisor pairings.

    ``assembly`` maps ``H_2(plus) + H_2(minus)`` (plus coordinates first) to
    the lattice of the glued manifold; classes of a broken map assemble to
    the sum of their images.
    """
    plus_model: ThreefoldModel
    minus_model: ThreefoldModel
    z_star_plus: tuple[int, ...]
    z_star_minus: tuple[int, ...]
    assembly: LatticeMap
    glued_c1: tuple[int, ...] | None = None
    n: int = 2

    def __post_init__(self):
        object.__setattr__(self, "z_star_plus", as_class(self.z_star_plus))
        object.__setattr__(self, "z_star_minus", as_class(self.z_star_minus))
        rp, rm = self.plus_model.h2_rank, self.minus_model.h2_rank
        if len(self.z_star_plus) != rp or len(self.z_star_minus) != rm:
            raise ValueError("Z pairing length does not match the side lattice")
        if self.assembly.source.rank != rp + rm:
            raise ValueError("assembly must act on plus + minus coordinates")
        if self.glued_c1 is not None:
            object.__setattr__(self, "glued_c1", as_class(self.glued_c1))
            if len(self.glued_c1) != self.assembly.target.rank:
                raise ValueError("glued_c1 has the wrong length")

    def model(self, side: str) -> ThreefoldModel:
        return self.plus_model if side == "plus" else self.minus_model

    def z_star(self, side: str) -> tuple[int, ...]:
        return self.z_star_plus if side == "plus" else self.z_star_minus

    def assemble(self, side: str, A) -> tuple[int, ...]:
        rp, rm = self.plus_model.h2_rank, self.minus_model.h2_rank
        A = as_class(A)
        v = A + (0,) * rm if side == "plus" else (0,) * rp + A
        return apply_map(self.assembly, v)


@dataclass(frozen=True, order=True)
class SplittingComponent:
    side: str
    A: tuple[int, ...]
    g: int
    points: tuple[int, ...] = ()
    ends: tuple[int, ...] = ()

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be plus or minus, got {self.side!r}")
        object.__setattr__(self, "A", as_class(self.A))
        object.__setattr__(self, "points", tuple(sorted(self.points)))
        object.__setattr__(self, "ends", tuple(sorted(self.ends, reverse=True)))
        if self.g < 0:
            raise ValueError("component genus must be non-negative")
        if any(k <= 0 for k in self.ends):
            raise ValueError("contact orders must be positive")

    @property
    def m(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {"side": self.side, "class": list(self.A), "genus": self.g,
                "points": list(self.points), "ends": list(self.ends)}


@dataclass(frozen=True)
class SplittingType:
    """Components plus edges ``(i, j, k)``: component ``i`` (plus) meets
    component ``j`` (minus) at an end of contact order ``k``."""
    components: tuple[SplittingComponent, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))

    @property
    def nu(self) -> int:
        return len(self.edges)

    @property
    def is_pure(self) -> bool:
        return not self.edges

    @property
    def multiplicity(self) -> int:
        """``|k|``, the product of contact orders over matched pairs."""
        return reduce(lambda a, e: a * e[2], self.edges, 1)

    def genus(self) -> int:
        l = len(self.components)
        return sum(c.g for c in self.components) + self.nu - l + 1

    def edges_at(self, i: int) -> list[int]:
        return [e for e, (a, b, _) in enumerate(self.edges) if i in (a, b)]

    def check(self, cut: CutModel) -> None:
        """Raise ``ValueError`` unless every structural invariant holds."""
        comps = self.components
        if not comps:
            raise ValueError("a splitting type needs a component")
        for i, j, k in self.edges:
            if not (0 <= i < len(comps) and 0 <= j < len(comps)):
                raise ValueError(f"edge {(i, j, k)} points outside the component list")
            if comps[i].side != "plus" or comps[j].side != "minus":
                raise ValueError(f"edge {(i, j, k)} must join a plus to a minus component")
            if k <= 0:
                raise ValueError("edge contact order must be positive")
        for i, c in enumerate(comps):
            ks = sorted((self.edges[e][2] for e in self.edges_at(i)), reverse=True)
            if tuple(ks) != c.ends:
                raise ValueError(f"component {i}: ends {c.ends} do not match its edges {ks}")
            if sum(c.ends) != pair(cut.z_star(c.side), c.A):
                raise ValueError(f"component {i}: contact orders do not sum to Z.A")
        pts = [p for c in comps for p in c.points]
        if len(set(pts)) != len(pts):
            raise ValueError("a marked point sits on two components")
        if len(comps) > 1 and not self.edges:
            raise ValueError("disconnected splitting type")
        if not _connected(len(comps), self.edges):
            raise ValueError("the matching graph is disconnected")

    def assembled_class(self, cut: CutModel) -> tuple[int, ...]:
        total = (0,) * cut.assembly.target.rank
        for c in self.components:
            total = add(total, cut.assemble(c.side, c.A))
        return total

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "edges": [list(e) for e in self.edges]}


def _connected(n, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1


def canonical(t: SplittingType) -> SplittingType:
    """Representative of ``t`` up to relabelling identical components."""
    order = sorted(range(len(t.components)), key=lambda i: t.components[i])
    comps = tuple(t.components[i] for i in order)
    pos = {old: new for new, old in enumerate(order)}
    edges = [(pos[i], pos[j], k) for i, j, k in t.edges]
    groups = []
    start = 0
    for i in range(1, len(comps) + 1):
        if i == len(comps) or comps[i] != comps[start]:
            groups.append(list(range(start, i)))
            start = i
    best = None
    for perms in product(*(permutations(g) for g in groups)):
        relabel = {}
        for g, p in zip(groups, perms):
            relabel.update(zip(g, p))
        cand = tuple(sorted((relabel[i], relabel[j], k) for i, j, k in edges))
        if best is None or cand < best:
            best = cand
    return SplittingType(comps, best or ())


# index formulas -----------------------------------------------------------

def index_closed(c1A: int, g: int, n: int = 2) -> int:
    if g < 0:
        raise ValueError("genus must be non-negative")
    return 2 * c1A + (n + 1) * (2 - 2 * g) + 6 * g - 6


def index_log(comp: SplittingComponent, c1_side, n: int = 2) -> int:
    """Index of a side component with its ends, marked points excluded.

    Each end of contact order ``k`` trades ``2k`` of first Chern class for
    a puncture worth ``2``; a single-end genus-0 component with ``C_1 = c``
    has index ``2(c - k + 1)``.
    """
    c1 = pair(c1_side, comp.A)
    return (2 * c1 + (n + 1) * (2 - 2 * comp.g) + 6 * comp.g - 6
            + 2 * len(comp.ends) - 2 * sum(comp.ends))


def glued_c1(cut: CutModel, t: SplittingType) -> int:
    if cut.glued_c1 is None:
        raise ValueError("cut model carries no first Chern class for the glued manifold")
    return pair(cut.glued_c1, t.assembled_class(cut))


def additivity_rhs(cut: CutModel, t: SplittingType) -> int:
    """``2 n nu + 2 C_1(A) + (n+1)(2-2g) + 6g - 6``."""
    return 2 * cut.n * t.nu + index_closed(glued_c1(cut, t), t.genus(), cut.n)


def side_index(cut: CutModel, t: SplittingType, side: str) -> int:
    m = cut.model(side)
    return sum(index_log(c, m.c1, cut.n) for c in t.components if c.side == side)


# enumeration --------------------------------------------------------------

def _partitions(total: int, largest: int | None = None):
    if total == 0:
        yield ()
        return
    largest = total if largest is None else largest
    for k in range(min(total, largest), 0, -1):
        for rest in _partitions(total - k, k):
            yield (k,) + rest


def _shapes(cut: CutModel, side: str, bound):
    """(class, ends) for nonzero effective classes with positive Z-pairing."""
    model = cut.model(side)
    out = []
    for A in model.cone_points(bound):
        z = pair(cut.z_star(side), A)
        if any(A) and z > 0:
            for ends in _partitions(z):
                out.append((A, ends))
    return out


def _multisets(shapes, area, budget):
    """Non-empty multisets of shapes with total area at most ``budget``."""
    # sorted by area so the scan can stop at the first shape that overflows
    shapes = sorted(shapes, key=lambda s: (pair(area, s[0]), s))
    areas = [Fraction(pair(area, A)) for A, _ in shapes]

    def walk(i, chosen, used):
        if chosen:
            yield tuple(chosen), used
        for j in range(i, len(shapes)):
            if used + areas[j] > budget:
                break
            chosen.append(shapes[j])
            yield from walk(j, chosen, used + areas[j])
            chosen.pop()

    yield from walk(0, [], Fraction(0))


def _matchings(plus_slots, minus_slots):
    """Bijections between end slots that preserve contact order."""
    by_k = {}
    for s in minus_slots:
        by_k.setdefault(s[1], []).append(s)
    plus_by_k = {}
    for s in plus_slots:
        plus_by_k.setdefault(s[1], []).append(s)
    if Counter(k for _, k in plus_slots) != Counter(k for _, k in minus_slots):
        return
    ks = sorted(plus_by_k)
    for choice in product(*(set(permutations(by_k[k])) for k in ks)):
        edges = []
        for k, perm in zip(ks, choice):
            edges += [(p[0], q[0], k) for p, q in zip(plus_by_k[k], perm)]
        yield edges


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for x in range(total + 1):
        for rest in _compositions(total - x, parts - 1):
            yield (x,) + rest


def enumerate_splittings(cut: CutModel, target: ClassCoset, g: int, m: int,
                         area_bound) -> list[SplittingType]:
    """Every splitting type of genus ``g`` with ``m`` labelled marked points
    whose assembled class lies in ``target`` and whose total area (summed
    over both sides) is at most ``area_bound``."""
    bound = Fraction(area_bound)
    if bound <= 0:
        raise ValueError("area bound must be positive")
    if g < 0 or m < 0:
        raise ValueError("genus and marked-point count must be non-negative")
    found = set()
    # pure types
    for side in SIDES:
        model = cut.model(side)
        for A in model.cone_points(bound):
            if any(A) and pair(cut.z_star(side), A) == 0 and target.contains(cut.assemble(side, A)):
                found.add(SplittingType((SplittingComponent(side, A, g, tuple(range(m))),)))
    # mixed types; minus multisets are grouped by their end multiset once
    pm, mm = cut.plus_model, cut.minus_model
    by_ends = {}
    for minus_set, used_m in _multisets(_shapes(cut, "minus", bound), mm.area, bound):
        key = tuple(sorted(k for _, ends in minus_set for k in ends))
        by_ends.setdefault(key, []).append((minus_set, used_m))
    for plus_set, used in _multisets(_shapes(cut, "plus", bound), pm.area, bound):
        key = tuple(sorted(k for _, ends in plus_set for k in ends))
        nu = len(key)
        for minus_set, used_m in by_ends.get(key, ()):
            l = len(plus_set) + len(minus_set)
            spare = g - nu + l - 1
            if used + used_m > bound or spare < 0:
                continue
            total = (0,) * cut.assembly.target.rank
            for A, _ in plus_set:
                total = add(total, cut.assemble("plus", A))
            for A, _ in minus_set:
                total = add(total, cut.assemble("minus", A))
            if not target.contains(total):
                continue
            shapes = [("plus",) + s for s in plus_set] + [("minus",) + s for s in minus_set]
            plus_slots = [(i, k) for i, s in enumerate(shapes) if s[0] == "plus" for k in s[2]]
            minus_slots = [(i, k) for i, s in enumerate(shapes) if s[0] == "minus" for k in s[2]]
            graphs = {tuple(sorted(e)) for e in _matchings(plus_slots, minus_slots)
                      if _connected(l, e)}
            if not graphs:
                continue
            for genera in _compositions(spare, l):
                for where in product(range(l), repeat=m):
                    comps = tuple(
                        SplittingComponent(side, A, gi, tuple(p for p in range(m) if where[p] == i), ends)
                        for i, ((side, A, ends), gi) in enumerate(zip(shapes, genera)))
                    for edges in graphs:
                        found.add(canonical(SplittingType(comps, edges)))
    return sorted(found, key=_type_key)


def _type_key(t: SplittingType):
    return (len(t.components), t.components, t.edges)


def vanishing_filter(types: Sequence[SplittingType], insertion_degrees: Sequence[int],
                     support_side: str, cut: CutModel) -> list[SplittingType]:
    """Drop mixed types whose support-side components cannot carry the
    insertions: their index plus two per marked point there falls short of
    the total insertion degree."""
    if support_side not in SIDES:
        raise ValueError("support_side must be plus or minus")
    need = sum(insertion_degrees)
    out = []
    for t in types:
        if not t.is_pure:
            here = [c for c in t.components if c.side == support_side]
            have = side_index(cut, t, support_side) + 2 * sum(c.m for c in here)
            if have < need:
                continue
        out.append(t)
    return out


# evaluation ---------------------------------------------------------------

def _component_labels(c: SplittingComponent, insertions, side_idx):
    return [insertions[p][side_idx] for p in c.points]


def _check_insertions(cut, insertions):
    for p, (a, b) in enumerate(insertions):
        da, db = cut.plus_model.label_degree(a), cut.minus_model.label_degree(b)
        if da != db or da % 2:
            raise ValueError(f"insertion {p}: degrees {da} and {db} must agree and be even")


def _check_tables(cut, plus, minus):
    if plus.z_star != cut.z_star_plus or minus.z_star != cut.z_star_minus:
        raise ValueError("log table tangency functional disagrees with the cut model")


def _component_tensor(table: LogGWTable, t: SplittingType, i: int, insertions, side_idx, r, absent):
    """Log invariant of component ``i`` as an array over the Z-basis index of
    each of its edges (axes ordered like ``t.edges_at(i)``)."""
    c = t.components[i]
    slots = t.edges_at(i)
    labels = _component_labels(c, insertions, side_idx)
    arr = np.empty((r,) * len(slots), dtype=object)
    for idx in np.ndindex(*arr.shape):
        ends = [(t.edges[e][2], b) for e, b in zip(slots, idx)]
        arr[idx] = table.lookup(c.A, c.g, labels, ends, absent)
    return arr, slots


def _side_tensor(table, t, side, insertions, r, absent):
    side_idx = 0 if side == "plus" else 1
    arr = np.array(Fraction(1), dtype=object)
    axes = []
    for i, c in enumerate(t.components):
        if c.side != side:
            continue
        a, slots = _component_tensor(table, t, i, insertions, side_idx, r, absent)
        arr = np.multiply.outer(arr, a)
        axes += slots
    # reorder axes to edge order
    return np.transpose(arr, np.argsort(axes)) if axes else arr


def gluing_sum(C: SplittingType, plus: LogGWTable, minus: LogGWTable, z: ZModel,
               insertions: Sequence[tuple[str, str]] = (), cut: CutModel | None = None,
               absent: set | None = None) -> Fraction:
    """``|k| sum_{I,J} Psi^+(alpha^+, beta_I) delta^{IJ} Psi^-(alpha^-, beta_J)``.

    ``insertions[p]`` is the pair of labels (plus side, minus side) for
    marked point ``p``.
    """
    insertions = list(insertions)
    if cut is not None:
        _check_insertions(cut, insertions)
        _check_tables(cut, plus, minus)
    if C.is_pure:
        c = C.components[0]
        table, idx = (plus, 0) if c.side == "plus" else (minus, 1)
        return Fraction(table.lookup(c.A, c.g, _component_labels(c, insertions, idx), (), absent))
    r = z.rank
    P = _side_tensor(plus, C, "plus", insertions, r, absent)
    Q = _side_tensor(minus, C, "minus", insertions, r, absent)
    delta = np.array(z.inverse_pairing, dtype=object)
    # contract delta^{ab} into each edge axis of Q
    for e in range(C.nu):
        Q = np.moveaxis(np.tensordot(delta, Q, axes=([1], [e])), 0, e)
    total = (P * Q).sum() if C.nu else P * Q
    return C.multiplicity * Fraction(total)


def gluing_sum_bruteforce(C: SplittingType, plus: LogGWTable, minus: LogGWTable, z: ZModel,
                          insertions: Sequence[tuple[str, str]] = ()) -> Fraction:
    """Direct multi-index sum; reference for :func:`gluing_sum`."""
    insertions = list(insertions)
    if C.is_pure:
        return gluing_sum(C, plus, minus, z, insertions)
    r, nu = z.rank, C.nu

    def side_product(side, lab):
        idx = 0 if side == "plus" else 1
        table = plus if side == "plus" else minus
        out = Fraction(1)
        for i, c in enumerate(C.components):
            if c.side == side:
                ends = [(C.edges[e][2], lab[e]) for e in C.edges_at(i)]
                out *= table.lookup(c.A, c.g, _component_labels(c, insertions, idx), ends)
        return out

    labels = list(product(range(r), repeat=nu))
    left = {I: side_product("plus", I) for I in labels}
    right = {J: side_product("minus", J) for J in labels}
    total = Fraction(0)
    for I in labels:
        if not left[I]:
            continue
        for J in labels:
            if not right[J]:
                continue
            d = Fraction(1)
            for a, b in zip(I, J):
                d *= z.inverse_pairing[a][b]
            total += left[I] * d * right[J]
    return C.multiplicity * total


def invariant_breakdown(cut: CutModel, target: ClassCoset, g: int, m: int,
                        plus: LogGWTable, minus: LogGWTable, z: ZModel,
                        insertions: Sequence[tuple[str, str]] = (), area_bound=10,
                        support_side: str | None = None, absent: set | None = None):
    """List of ``(type, value)`` over the enumerated (optionally filtered) types."""
    insertions = list(insertions)
    if len(insertions) != m:
        raise ValueError(f"{m} marked points but {len(insertions)} insertions")
    _check_insertions(cut, insertions)
    _check_tables(cut, plus, minus)
    types = enumerate_splittings(cut, target, g, m, area_bound)
    if support_side is not None:
        degs = [cut.plus_model.label_degree(a) for a, _ in insertions]
        types = vanishing_filter(types, degs, support_side, cut)
    return [(t, gluing_sum(t, plus, minus, z, insertions, cut, absent)) for t in types]


def total_invariant(cut: CutModel, target: ClassCoset, g: int, m: int,
                    plus: LogGWTable, minus: LogGWTable, z: ZModel,
                    insertions: Sequence[tuple[str, str]] = (), area_bound=10,
                    support_side: str | None = None, absent: set | None = None) -> Fraction:
    rows = invariant_breakdown(cut, target, g, m, plus, minus, z, insertions,
                               area_bound, support_side, absent)
    return sum((v for _, v in rows), Fraction(0))


@dataclass
class GluingCheck:
    glued: Fraction
    absolute: Fraction
    absent_flags: list = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.glued == self.absolute


def check_against_absolute(total: Fraction, absolute_value, absent=()) -> GluingCheck:
    """Compare a glued total with an independently supplied absolute value."""
    return GluingCheck(Fraction(total), Fraction(absolute_value), sorted(absent, key=repr))
