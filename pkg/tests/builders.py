"""Random cut models and gluing instances for property and acceptance tests."""
from __future__ import annotations

import random
from itertools import product
from fractions import Fraction

import sympy

from gwsurgery.cohomology import ThreefoldModel
from gwsurgery.gluing import CutModel, SplittingComponent, SplittingType, ZModel
from gwsurgery.lattice import ClassCoset, HomologyLattice, LatticeMap
from gwsurgery.tables import LogGWTable

RANK2_CONES = (((1, 0), (0, 1)), ((1, -1), (0, 1)), ((1, 1), (0, 1)))


def _side_model(rng: random.Random, name: str, rank: int):
    """Model plus a Z-pairing that is 0, 1 or 2 on each cone generator."""
    labels = tuple(f"{name}{i}" for i in range(rank))
    if rank == 1:
        cone, area = ((1,),), (rng.randint(1, 4),)
        z = (rng.randint(0, 2),)
    else:
        cone = rng.choice(RANK2_CONES)
        b = rng.randint(1, 3)
        # keep every generator at positive area
        a = b + rng.randint(1, 3) if cone[0] == (1, -1) else rng.randint(1, 4)
        area = (a, b)
        # the cones are unimodular: solve for z on the generators
        v1, v2 = rng.randint(0, 2), rng.randint(0, 2)
        z = (v1 - cone[0][1] * v2, v2)
    c1 = tuple(rng.randint(-1, 3) for _ in range(rank))
    return ThreefoldModel(name, HomologyLattice(rank, labels), {}, c1, area, cone), z


def random_cut(rng: random.Random, max_rank: int = 2):
    """A cut model with side ranks and a glued lattice of rank at most
    ``max_rank``, plus a target coset containing the image of a random pair
    of effective side classes."""
    rp, rm = rng.randint(1, max_rank), rng.randint(1, max_rank)
    (plus, zp), (minus, zm) = _side_model(rng, "p", rp), _side_model(rng, "m", rm)
    rg = rng.randint(1, min(max_rank, rp + rm))
    while True:
        mat = tuple(tuple(rng.randint(-1, 1) for _ in range(rp + rm)) for _ in range(rg))
        if sympy.Matrix(mat).rank() == rg:
            break
    src = HomologyLattice(rp + rm, tuple(f"s{i}" for i in range(rp + rm)))
    glued = HomologyLattice(rg, tuple(f"g{i}" for i in range(rg)))
    cut = CutModel(plus, minus, zp, zm, LatticeMap(src, glued, mat, "surjection"))
    pick = []
    for model in (plus, minus):
        c = [0] * model.h2_rank
        for gen in model.effective_cone:
            k = rng.randint(0, 2)
            c = [x + k * y for x, y in zip(c, gen)]
        pick += c
    rep = tuple(sum(r[i] * pick[i] for i in range(rp + rm)) for r in mat)
    kernel = ()
    if rg == 2 and rng.random() < 0.3:
        kernel = ((rng.randint(0, 1), 1),)
    return cut, ClassCoset(rep, kernel)


def random_z(rng: random.Random, rank: int) -> ZModel:
    while True:
        P = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(rank)]
        if sympy.Matrix(P).det() != 0:
            return ZModel.from_pairing(tuple(f"z{i}" for i in range(rank)), P)


def _line_model(name):
    return ThreefoldModel(name, HomologyLattice(1, (name.upper(),)), {}, (0,), (1,), ((1,),))


def random_gluing_instance(rng: random.Random, max_rank: int = 4, max_nu: int = 3,
                           shape: tuple[int, int, int] | None = None):
    """A mixed splitting type with random contact orders on rank-1 sides
    (``Z.A`` is the single coordinate) and dense random log tables.

    ``shape = (plus components, minus components, nu)`` fixes the graph size.
    """
    r = rng.randint(1, max_rank)
    z = random_z(rng, r)
    while True:
        if shape:
            n_plus, n_minus, nu = shape
        else:
            n_plus, n_minus = rng.randint(1, 2), rng.randint(1, 2)
            nu = rng.randint(max(1, n_plus + n_minus - 1), max_nu)
        l = n_plus + n_minus
        edges = [(rng.randrange(n_plus), n_plus + rng.randrange(n_minus), rng.randint(1, 3))
                 for _ in range(nu)]
        touched = {i for e in edges for i in e[:2]}
        if len(touched) == l:
            break
    comps = []
    for i in range(l):
        side = "plus" if i < n_plus else "minus"
        ks = [k for a, b, k in edges if i in (a, b)]
        comps.append(SplittingComponent(side, (sum(ks),), rng.randint(0, 1), (), ks))
    t = SplittingType(tuple(comps), edges)
    plus_m, minus_m = _line_model("xp"), _line_model("xm")
    tables = {}
    for side, model in (("plus", plus_m), ("minus", minus_m)):
        entries = {}
        for c in comps:
            if c.side != side:
                continue
            for idx in product(range(r), repeat=len(c.ends)):
                ends = tuple(sorted(zip(c.ends, idx)))
                if rng.random() < 0.8:
                    entries[(c.A, c.g, (), ends)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        tables[side] = LogGWTable(f"{model.name}|Z", model, (1,), entries)
    return t, tables["plus"], tables["minus"], z

