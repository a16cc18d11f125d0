"""Even cohomology of a closed 3-fold model: triple intersections on H^2,
the H^2 x H_2 pairing, Poincare-dual H^4 = H_2 (x) Q, and pullbacks along
surgery maps.

Basis labels name the graded pieces: ``"1"`` spans H^0, ``model.h2_labels``
is the basis dual to the lattice basis, ``model.h4_labels`` the Poincare
duals of the lattice basis, and ``"pt"`` spans H^6.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .lattice import HomologyLattice, LatticeMap, as_class, cone_points, pair, rational_inverse, transpose

UNIT = "1"
POINT = "pt"


def _fracs(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class FlopLocusData:
    """A class ``gamma`` carrying ``count`` exceptional (-1,-1) curves."""
    gamma: tuple[int, ...]
    count: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_class(self.gamma))
        if not any(self.gamma):
            raise ValueError("flop locus class must be nonzero")
        if self.count < 0:
            raise ValueError("flop locus count must be non-negative")


@dataclass(frozen=True)
class CohClass:
    degree: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree not in (0, 2, 4, 6):
            raise ValueError(f"only even degrees 0..6 are modeled, got {self.degree}")
        object.__setattr__(self, "coords", _fracs(self.coords))

    def __add__(self, other: "CohClass") -> "CohClass":
        if other.degree != self.degree or len(other.coords) != len(self.coords):
            raise ValueError("cannot add classes from different graded pieces")
        return CohClass(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, c) -> "CohClass":
        return CohClass(self.degree, tuple(Fraction(c) * x for x in self.coords))

    def __neg__(self) -> "CohClass":
        return (-1) * self

    def is_zero(self) -> bool:
        return not any(self.coords)


def _sym3(entries, r):
    """Dense symmetric r x r x r tensor from a full nested list or from
    ``{(i, j, k): value}`` (one ordering per entry suffices)."""
    T = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    if isinstance(entries, dict):
        seen = {}
        for key, val in entries.items():
            val = Fraction(val)
            for p in set(permutations(key)):
                if p in seen and seen[p] != val:
                    raise ValueError(f"conflicting triple entries at {p}")
                seen[p] = val
                T[p[0]][p[1]][p[2]] = val
    else:
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    T[i][j][k] = Fraction(entries[i][j][k])
    return tuple(tuple(tuple(row) for row in plane) for plane in T)


@dataclass(frozen=True)
class ThreefoldModel:
    name: str
    lattice: HomologyLattice
    triple: tuple
    c1: tuple[int, ...]
    area: tuple[Fraction, ...]
    effective_cone: tuple[tuple[int, ...], ...]
    flop_loci: tuple[FlopLocusData, ...] = ()
    n: int = 2
    h2_labels: tuple[str, ...] | None = None
    h4_labels: tuple[str, ...] | None = None
    calabi_yau: bool | None = None

    def __post_init__(self):
        r = self.lattice.rank
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("triple", _sym3(self.triple, r))
        set_("c1", as_class(self.c1))
        set_("area", _fracs(self.area))
        set_("effective_cone", tuple(as_class(g) for g in self.effective_cone))
        set_("flop_loci", tuple(l if isinstance(l, FlopLocusData) else FlopLocusData(*l)
                                for l in self.flop_loci))
        if self.h2_labels is None:
            set_("h2_labels", tuple(l.lower() for l in self.lattice.basis_labels))
        if self.h4_labels is None:
            set_("h4_labels", tuple("pd_" + l for l in self.lattice.basis_labels))
        set_("h2_labels", tuple(self.h2_labels))
        set_("h4_labels", tuple(self.h4_labels))
        if len(self.c1) != r or len(self.area) != r:
            raise ValueError(f"{self.name}: c1 and area must have length {r}")
        if len(self.h2_labels) != r or len(self.h4_labels) != r:
            raise ValueError(f"{self.name}: need {r} labels for H^2 and for H^4")
        labels = (UNIT, POINT) + self.h2_labels + self.h4_labels
        if len(set(labels)) != len(labels):
            raise ValueError(f"{self.name}: cohomology basis labels collide")
        T = self.triple
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    if len({T[i][j][k], T[j][i][k], T[k][j][i], T[i][k][j]}) != 1:
                        raise ValueError(f"{self.name}: triple tensor is not symmetric")
        if not self.effective_cone:
            raise ValueError(f"{self.name}: effective cone needs generators")
        for g in self.effective_cone:
            self.lattice.check(g)
            if pair(self.area, g) <= 0:
                raise ValueError(f"{self.name}: area not positive on cone generator {g}")
        for locus in self.flop_loci:
            self.lattice.check(locus.gamma)
            if not in_cone_span(locus.gamma, self.effective_cone, self.area):
                raise ValueError(f"{self.name}: flop locus {locus.gamma} is not effective")
        cy = not any(self.c1)
        if self.calabi_yau is None:
            set_("calabi_yau", cy)
        elif self.calabi_yau != cy:
            raise ValueError(f"{self.name}: Calabi-Yau flag disagrees with c1")

    @property
    def h2_rank(self) -> int:
        return self.lattice.rank

    @property
    def h4_rank(self) -> int:
        return self.lattice.rank

    def labels(self) -> tuple[str, ...]:
        return (UNIT,) + self.h2_labels + self.h4_labels + (POINT,)

    def label_degree(self, label: str) -> int:
        if label == UNIT:
            return 0
        if label == POINT:
            return 6
        if label in self.h2_labels:
            return 2
        if label in self.h4_labels:
            return 4
        raise KeyError(f"{self.name}: unknown cohomology label {label!r}")

    def coh(self, label: str) -> CohClass:
        d = self.label_degree(label)
        if d in (0, 6):
            return CohClass(d, (1,))
        names = self.h2_labels if d == 2 else self.h4_labels
        i = names.index(label)
        return CohClass(d, tuple(int(j == i) for j in range(self.h2_rank)))

    def make(self, degree: int, coords) -> CohClass:
        c = CohClass(degree, coords)
        self.check_class(c)
        return c

    def check_class(self, a: CohClass) -> None:
        want = 1 if a.degree in (0, 6) else self.h2_rank
        if len(a.coords) != want:
            raise ValueError(f"{self.name}: degree-{a.degree} class needs {want} coordinates")

    def expand(self, a: CohClass) -> list[tuple[str, Fraction]]:
        """Write ``a`` in the label basis, dropping zero coefficients."""
        self.check_class(a)
        if a.degree == 0:
            names = (UNIT,)
        elif a.degree == 6:
            names = (POINT,)
        else:
            names = self.h2_labels if a.degree == 2 else self.h4_labels
        return [(n, c) for n, c in zip(names, a.coords) if c]

    def vdim(self, A, g: int, m: int) -> int:
        """Real virtual dimension of genus-g, m-pointed stable maps in class A."""
        return 2 * pair(self.c1, A) + (self.n + 1) * (2 - 2 * g) + 6 * g - 6 + 2 * m

    def cone_points(self, bound):
        return cone_points(self.effective_cone, self.area, bound)


def in_cone_span(v, gens, area) -> bool:
    """Is ``v`` a non-negative integer combination of ``gens``?  ``area`` must
    be positive on every generator; it bounds each coefficient."""
    v = as_class(v)
    gens = [as_class(g) for g in gens]
    total = Fraction(pair(area, v))
    if total < 0:
        return False
    areas = [Fraction(pair(area, g)) for g in gens]

    def walk(i, rem, budget):
        if not any(rem):
            return True
        if i == len(gens):
            return False
        k = 0
        while k * areas[i] <= budget:
            r = tuple(x - k * y for x, y in zip(rem, gens[i]))
            if walk(i + 1, r, budget - k * areas[i]):
                return True
            k += 1
        return False

    return walk(0, v, total)


def cup3(model: ThreefoldModel, a1: CohClass, a2: CohClass, a3: CohClass) -> Fraction:
    for a in (a1, a2, a3):
        if a.degree != 2:
            raise ValueError("cup3 takes degree-2 classes")
        model.check_class(a)
    T = model.triple
    r = model.h2_rank
    total = Fraction(0)
    for i in range(r):
        if not a1.coords[i]:
            continue
        for j in range(r):
            if not a2.coords[j]:
                continue
            for k in range(r):
                total += T[i][j][k] * a1.coords[i] * a2.coords[j] * a3.coords[k]
    return total


def cup_product(model: ThreefoldModel, a1: CohClass, a2: CohClass, a3: CohClass) -> Fraction:
    """Integral of a1 a2 a3 over the 3-fold, for any even degrees."""
    cls = sorted((a1, a2, a3), key=lambda a: a.degree)
    for a in cls:
        model.check_class(a)
    degs = tuple(a.degree for a in cls)
    if sum(degs) != 6:
        return Fraction(0)
    if degs == (2, 2, 2):
        return cup3(model, *cls)
    if degs == (0, 0, 6):
        return cls[0].coords[0] * cls[1].coords[0] * cls[2].coords[0]
    if degs == (0, 2, 4):
        # H^4 is Poincare dual to H_2: pair the H^2 class with the dual cycle
        return cls[0].coords[0] * sum(x * y for x, y in zip(cls[1].coords, cls[2].coords))
    raise AssertionError(degs)


def divisor_pair(a: CohClass, A) -> Fraction:
    if a.degree != 2:
        raise ValueError("divisor pairing needs a degree-2 class")
    return Fraction(pair(a.coords, as_class(A)))


@dataclass(frozen=True)
class CohPullback:
    """Pullback ``H^even(target) -> H^even(source)`` dual to an H_2 map.

    ``on_h2`` acts on target H^2 coordinates (it is the transpose of the
    lattice map); ``on_h4`` acts on Poincare-dual H_2 coordinates and is the
    inverse (flops) or a chosen right inverse (transitions) of the map.
    """
    h2_map: LatticeMap
    on_h4: tuple[tuple[Fraction, ...], ...]
    on_h2: tuple[tuple[Fraction, ...], ...] = field(default=None)

    def __post_init__(self):
        expected = tuple(tuple(Fraction(x) for x in row) for row in transpose(self.h2_map.matrix))
        if self.on_h2 is None:
            object.__setattr__(self, "on_h2", expected)
        else:
            got = tuple(tuple(Fraction(x) for x in row) for row in self.on_h2)
            if got != expected:
                raise ValueError("on_h2 must be the transpose of the H_2 map")
            object.__setattr__(self, "on_h2", got)
        h4 = tuple(tuple(Fraction(x) for x in row) for row in self.on_h4)
        object.__setattr__(self, "on_h4", h4)
        src, tgt = self.h2_map.source.rank, self.h2_map.target.rank
        if len(h4) != src or any(len(r) != tgt for r in h4):
            raise ValueError(f"on_h4 must be {src}x{tgt}")
        # phi . on_h4 = identity: the H^4 map is dual to a right inverse
        for i in range(tgt):
            for j in range(tgt):
                s = sum(self.h2_map.matrix[i][k] * h4[k][j] for k in range(src))
                if s != (i == j):
                    raise ValueError("on_h4 is not a right inverse of the H_2 map")

    @classmethod
    def for_flop(cls, phi: LatticeMap) -> "CohPullback":
        return cls(phi, rational_inverse(phi.matrix))

    @classmethod
    def for_transition(cls, phi_e: LatticeMap, right_inverse) -> "CohPullback":
        return cls(phi_e, right_inverse)


def pullback(p: CohPullback, a: CohClass) -> CohClass:
    if a.degree % 2:
        raise ValueError("only even-degree classes pull back")
    if a.degree in (0, 6):
        return CohClass(a.degree, a.coords)
    M = p.on_h2 if a.degree == 2 else p.on_h4
    if len(a.coords) != len(M[0]):
        raise ValueError("class does not live on the pullback's target")
    return CohClass(a.degree, tuple(sum((r[j] * a.coords[j] for j in range(len(r))), Fraction(0))
                                    for r in M))
