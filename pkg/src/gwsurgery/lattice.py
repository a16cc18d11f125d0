"""Free lattices standing in for H_2 of a 3-fold, and the integer maps
between them induced by flops, transitions, blow-ups and symplectic cuts.

Class vectors are plain tuples of ``int`` in the lattice basis.  Maps are
stored as explicit integer matrices (rows index the target basis).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

Vector = tuple


def as_class(v: Iterable[int]) -> tuple[int, ...]:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"class coordinate {x} is not an integer")
            x = x.numerator
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"class coordinate {x!r} is not an integer")
        out.append(int(x))
    return tuple(out)


def add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def scale(k: int, a: Sequence[int]) -> tuple[int, ...]:
    return tuple(k * x for x in a)


def pair(functional: Sequence, a: Sequence[int]):
    """Evaluate a linear functional (given by its coordinates) on a class."""
    if len(functional) != len(a):
        raise ValueError(f"length mismatch: functional {len(functional)} vs class {len(a)}")
    return sum((f * x for f, x in zip(functional, a)), 0)


def multiple_of(a: Sequence[int], gamma: Sequence[int]) -> int | None:
    """Return k >= 1 with a == k*gamma, or None."""
    if not any(gamma):
        return None
    k = None
    for x, y in zip(a, gamma):
        if y == 0:
            if x != 0:
                return None
            continue
        if x % y:
            return None
        q = x // y
        if k is None:
            k = q
        elif k != q:
            return None
    if k is None or k < 1:
        return None
    return k


def _sym(matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in row] for row in matrix])


def _frac(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def rational_rank(matrix) -> int:
    if not matrix or not matrix[0]:
        return 0
    return _sym(matrix).rank()


def rational_inverse(matrix) -> tuple[tuple[Fraction, ...], ...]:
    inv = _sym(matrix).inv()
    return tuple(tuple(_frac(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def transpose(matrix) -> tuple[tuple, ...]:
    return tuple(zip(*matrix))


def matvec(matrix, v):
    return tuple(sum((a * b for a, b in zip(row, v)), 0) for row in matrix)


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), 0) for col in bt) for row in a)


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class HomologyLattice:
    rank: int
    basis_labels: tuple[str, ...]
    exceptional_classes: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "exceptional_classes",
                           tuple(as_class(c) for c in self.exceptional_classes))
        if self.rank < 1:
            raise ValueError("lattice rank must be positive")
        if len(self.basis_labels) != self.rank:
            raise ValueError("need one basis label per rank")
        if len(set(self.basis_labels)) != self.rank:
            raise ValueError("basis labels must be pairwise distinct")
        for c in self.exceptional_classes:
            if len(c) != self.rank:
                raise ValueError(f"exceptional class {c} has wrong length")

    @classmethod
    def from_labels(cls, labels: Sequence[str], exceptional=()) -> "HomologyLattice":
        return cls(len(labels), tuple(labels), tuple(exceptional))

    def basis_vector(self, label: str) -> tuple[int, ...]:
        i = self.basis_labels.index(label)
        return tuple(int(j == i) for j in range(self.rank))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def check(self, a) -> tuple[int, ...]:
        a = as_class(a)
        if len(a) != self.rank:
            raise ValueError(f"class {a} does not live in a rank-{self.rank} lattice")
        return a


KINDS = ("iso", "surjection", "injection")


@dataclass(frozen=True)
class LatticeMap:
    source: HomologyLattice
    target: HomologyLattice
    matrix: tuple[tuple[int, ...], ...]
    kind: str

    def __post_init__(self):
        m = tuple(as_class(row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if len(m) != self.target.rank or any(len(r) != self.source.rank for r in m):
            raise ValueError(
                f"matrix must be {self.target.rank}x{self.source.rank} (target x source)")
        rank = rational_rank(m)
        if self.kind == "iso":
            if self.source.rank != self.target.rank:
                raise ValueError("iso needs a square matrix")
            det = _sym(m).det()
            if det not in (1, -1):
                raise ValueError("iso matrix is not invertible over the integers")
        elif self.kind == "surjection" and rank != self.target.rank:
            raise ValueError("surjection matrix has no rational right inverse")
        elif self.kind == "injection" and rank != self.source.rank:
            raise ValueError("injection matrix has a nontrivial kernel")

    def __call__(self, a):
        return apply_map(self, a)

    def inverse(self) -> "LatticeMap":
        if self.kind != "iso":
            raise ValueError("only iso maps are invertible")
        inv = rational_inverse(self.matrix)
        return LatticeMap(self.target, self.source, tuple(as_class(r) for r in inv), "iso")


def apply_map(m: LatticeMap, a) -> tuple[int, ...]:
    a = as_class(a)
    if len(a) != m.source.rank:
        raise ValueError(f"class of length {len(a)} fed to a map from rank {m.source.rank}")
    return matvec(m.matrix, a)


def make_flop_map(L: HomologyLattice, L_f: HomologyLattice,
                  pairing: Sequence[tuple[int, int]]) -> LatticeMap:
    """Flop isomorphism: ``Gamma_j -> -Gamma_f_j`` on the paired exceptional
    classes and the identity on the remaining basis vectors.

    ``pairing`` lists ``(i, j)`` with ``i`` indexing ``L.exceptional_classes``
    and ``j`` indexing ``L_f.exceptional_classes``.  Both lattices must present
    a basis adapted to the exceptional curves: each paired exceptional class is
    a basis vector.
    """
    if L.rank != L_f.rank:
        raise ValueError("flop lattices must have equal rank")
    src = [i for i, _ in pairing]
    dst = [j for _, j in pairing]
    if len(set(src)) != len(src) or len(set(dst)) != len(dst):
        raise ValueError("flop pairing is not injective")
    cols = [None] * L.rank
    rows_used = set()
    for i, j in pairing:
        if not (0 <= i < len(L.exceptional_classes)) or not (0 <= j < len(L_f.exceptional_classes)):
            raise ValueError(f"pairing ({i}, {j}) does not point at exceptional classes")
        g, gf = L.exceptional_classes[i], L_f.exceptional_classes[j]
        bi, bj = _basis_index(g), _basis_index(gf)
        if bi is None or bj is None:
            raise ValueError("exceptional classes must be basis vectors in the chosen basis")
        cols[bi] = tuple(-x for x in gf)
        rows_used.add(bj)
    free_src = [k for k in range(L.rank) if cols[k] is None]
    free_dst = [k for k in range(L.rank) if k not in rows_used]
    for k, t in zip(free_src, free_dst):
        cols[k] = tuple(int(r == t) for r in range(L.rank))
    return LatticeMap(L, L_f, transpose(cols), "iso")


def _basis_index(v) -> int | None:
    nz = [i for i, x in enumerate(v) if x]
    if len(nz) == 1 and v[nz[0]] == 1:
        return nz[0]
    return None


def cone_points(cone: Sequence[Sequence[int]], area: Sequence, bound) -> list[tuple[int, ...]]:
    """All non-negative integer combinations of ``cone`` generators with
    area at most ``bound``, sorted and without duplicates."""
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("area bound must be non-negative")
    gens = [as_class(g) for g in cone]
    if not gens:
        raise ValueError("empty cone")
    rank = len(gens[0])
    areas = []
    for g in gens:
        a = Fraction(pair(area, g))
        if a <= 0:
            raise ValueError(f"area is not positive on cone generator {g}")
        areas.append(a)
    found = set()

    def walk(i, current, used):
        if i == len(gens):
            found.add(current)
            return
        k = 0
        while used + k * areas[i] <= bound:
            walk(i + 1, add(current, scale(k, gens[i])), used + k * areas[i])
            k += 1

    walk(0, (0,) * rank, Fraction(0))
    return sorted(found)


def fiber_classes(m: LatticeMap, b, area, bound, cone) -> list[tuple[int, ...]]:
    """Effective classes ``A`` with ``m(A) == b`` and area at most ``bound``."""
    b = as_class(b)
    if len(b) != m.target.rank:
        raise ValueError("fiber point does not live in the target lattice")
    return [a for a in cone_points(cone, area, bound) if apply_map(m, a) == b]


@dataclass(frozen=True)
class ClassCoset:
    """``representative + span_Z(kernel_basis)``."""
    representative: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rep = as_class(self.representative)
        ker = tuple(as_class(k) for k in self.kernel_basis)
        object.__setattr__(self, "representative", rep)
        object.__setattr__(self, "kernel_basis", ker)
        for k in ker:
            if len(k) != len(rep):
                raise ValueError("kernel vector has wrong length")
        if ker and rational_rank(transpose(ker)) != len(ker):
            raise ValueError("kernel_basis vectors must be linearly independent")

    def contains(self, a) -> bool:
        d = tuple(x - y for x, y in zip(as_class(a), self.representative))
        if not any(d):
            return True
        if not self.kernel_basis:
            return False
        # independent columns: the rational solution is unique, so membership
        # in the integer span is integrality of that solution
        K = _sym(transpose(self.kernel_basis))
        try:
            sol, params = K.gauss_jordan_solve(sympy.Matrix(d))
        except ValueError:
            return False
        if params.shape[0]:
            raise AssertionError("kernel basis is not independent")
        return all(sympy.Rational(x).q == 1 for x in sol)

    def same_coset(self, a, b) -> bool:
        return ClassCoset(as_class(a), self.kernel_basis).contains(b)
