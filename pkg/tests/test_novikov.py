from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gwsurgery.lattice import HomologyLattice, LatticeMap, make_flop_map
from gwsurgery.novikov import (NovikovSeries, Truncation, ac_normal_form, expand_atom, nv_ac_equal,
                               nv_closed_form, nv_expand, nv_mul, nv_substitute, parse, render)

L = HomologyLattice(2, ("H", "E"), ((0, 1),))
Lf = HomologyLattice(2, ("Hf", "Ef"), ((0, 1),))
PHI = make_flop_map(L, Lf, [(0, 0)])
H, E = (1, 0), (0, 1)
AREA = (10, 1)


def mono(A, c=1, t=None):
    return NovikovSeries.monomial(A, c, t)


def const(c, t=None):
    return NovikovSeries.constant(2, c, t)


def atom(g, c=1, t=None):
    return NovikovSeries.atom(g, c, t)


def test_normal_form_invariants():
    F = NovikovSeries(2, {E: 0, H: 2}, {E: 1})
    assert dict(F.poly) == {H: 2}
    with pytest.raises(ValueError):
        NovikovSeries(2, {}, {(0, 0): 1})
    with pytest.raises(ValueError):
        NovikovSeries(2, {(1,): 1})
    assert (atom(E) + atom(E)).atoms == {E: 2}


def test_mul_examples():
    one_plus = const(1) + mono(E)
    one_minus = const(1) - mono(E)
    assert nv_mul(one_plus, one_minus) == const(1) - mono((0, 2))
    assert nv_mul(NovikovSeries.zero(2), one_plus).is_zero()
    t = Truncation(AREA, 13)
    got = nv_mul(atom(E), mono(H), t)
    assert got.poly == {(1, 1): 1, (1, 2): 1, (1, 3): 1}


def test_mul_atoms_need_truncation():
    with pytest.raises(ValueError):
        nv_mul(atom(E), atom(H))
    with pytest.raises(ValueError):
        nv_mul(atom(E), mono(H))
    assert nv_mul(atom(E), const(3)) == atom(E, 3)


def test_substitute_examples():
    assert nv_substitute(mono(E), PHI) == mono((0, -1))
    assert nv_substitute(atom(E, Fraction(2, 3)), PHI) == atom((0, -1), Fraction(2, 3))
    ident = LatticeMap(L, L, ((1, 0), (0, 1)), "iso")
    F = const(2) + mono(H, 5) + atom(E, -1)
    assert nv_substitute(F, ident) == F
    kill = LatticeMap(L, HomologyLattice(1, ("Hb",)), ((1, 0),), "surjection")
    with pytest.raises(ValueError):
        nv_substitute(atom(E), kill)
    assert nv_substitute(mono(E, 4), kill) == NovikovSeries.constant(1, 4)


def test_closed_form_examples():
    t = Truncation(AREA, 9)
    F = NovikovSeries(2, {(0, k): 1 for k in range(1, 10)}, {}, t)
    G, ok = nv_closed_form(F, E)
    assert ok and G.atoms == {E: 1} and not G.poly
    F = NovikovSeries(2, {**{(0, k): 7 for k in range(1, 11)}, H: 1}, {}, Truncation(AREA, 10))
    G, ok = nv_closed_form(F, E)
    assert ok and G.atoms == {E: 7} and G.poly == {H: 1}
    assert nv_expand(G) == F
    F = NovikovSeries(2, {(0, k): k for k in range(1, 10)}, {}, t)
    G, ok = nv_closed_form(F, E)
    assert not ok and G == F
    with pytest.raises(ValueError):
        nv_closed_form(NovikovSeries(2, {E: 1}), E)


def test_ac_equal_examples():
    assert nv_ac_equal(atom(E), const(-1) - atom((0, -1)))
    F = mono(H, 3) + atom(E)
    assert not nv_ac_equal(F, F + const(1))
    t = Truncation(AREA, 6)
    expanded = NovikovSeries(2, {(0, k): 1 for k in range(1, 7)}, {}, t)
    assert nv_ac_equal(expanded, atom(E))
    short = NovikovSeries(2, {(0, k): 1 for k in range(1, 6)}, {}, t)
    assert not nv_ac_equal(short, atom(E))


def test_eq_615_shape():
    assert nv_ac_equal(atom(E) + atom((0, -1)), const(-1))
    assert ac_normal_form(atom((0, -1), 2)) == const(-2) - atom(E, 2)


classes = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any)
coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=4).filter(bool)


@st.composite
def series(draw, atoms=True):
    poly = draw(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), coeffs, max_size=4))
    at = draw(st.dictionaries(classes, coeffs, max_size=2)) if atoms else {}
    return NovikovSeries(2, poly, at)


@given(series(), series(), series())
def test_ac_equal_is_an_equivalence(F, G, K):
    assert nv_ac_equal(F, F)
    assert nv_ac_equal(F, ac_normal_form(F))
    assert nv_ac_equal(F, G) == nv_ac_equal(G, F)
    G2 = ac_normal_form(F, (1, 2))
    if nv_ac_equal(F, G2) and nv_ac_equal(G2, K):
        assert nv_ac_equal(F, K)


@given(st.dictionaries(st.integers(1, 6), coeffs, max_size=3), coeffs, st.integers(1, 30))
def test_closed_form_round_trip(extra, c, bound):
    t = Truncation(AREA, bound)
    poly = {(0, k): c for k in range(1, bound + 1)}
    for h, v in extra.items():
        poly[(h, 0)] = v
    F = NovikovSeries(2, {k: v for k, v in poly.items() if t.keeps(k)}, {}, t)
    G, ok = nv_closed_form(F, E)
    assert ok
    assert nv_expand(G) == F


@settings(max_examples=60)
@given(series(atoms=False), series(atoms=False), st.integers(0, 20))
def test_substitute_is_a_ring_map(F, G, bound):
    t = Truncation(AREA, bound)
    lhs = nv_substitute(nv_mul(F, G, t), PHI)
    tf = nv_substitute(NovikovSeries.zero(2, t), PHI).truncation
    rhs = nv_mul(nv_substitute(F, PHI), nv_substitute(G, PHI), tf)
    assert lhs == rhs


@given(st.integers(1, 4), st.data())
def test_eq_615_for_random_classes(rank, data):
    g = tuple(data.draw(st.lists(st.integers(-9, 9), min_size=rank, max_size=rank).filter(any)))
    neg = tuple(-x for x in g)
    lhs = NovikovSeries.atom(g) + NovikovSeries.atom(neg)
    assert nv_ac_equal(lhs, NovikovSeries.constant(rank, -1))


@given(series())
def test_render_parse_round_trip(F):
    text = render(F)
    assert parse(text, 2) == F
    assert render(parse(text)) == text if F.poly or F.atoms else text == "0"


def test_render_examples():
    assert render(const(0)) == "0"
    F = parse("3*q^[1,0] - q^[0,2] + 1/2*G([0,1]) - 5")
    assert F.poly == {(1, 0): 3, (0, 2): -1, (0, 0): -5} and F.atoms == {E: Fraction(1, 2)}
    assert render(F) == render(parse(render(F)))
    with pytest.raises(ValueError):
        parse("3*x^[1]")
    assert render(nv_expand(atom(E), Truncation((1, 1), 3))) == "q^[0,1] + q^[0,2] + q^[0,3]"


def test_expand_atom_needs_positive_area():
    with pytest.raises(ValueError):
        expand_atom((0, -1), 1, Truncation(AREA, 3))
