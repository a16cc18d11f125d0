from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gwsurgery.cohomology import (CohClass, CohPullback, FlopLocusData, ThreefoldModel, cup3,
                                  cup_product, divisor_pair, pullback)
from gwsurgery.lattice import HomologyLattice, apply_map
from gwsurgery.toy import flop_models, transition_toy

M, Mf, PHI = flop_models()
FLOP = CohPullback.for_flop(PHI)
TR = transition_toy()

rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def h2(model, coords):
    return CohClass(2, tuple(coords))


def test_cup3_examples():
    only_h = ThreefoldModel("X", HomologyLattice(2, ("H", "E")), {(0, 0, 0): 5}, (0, 0), (1, 1),
                            ((1, 0), (0, 1)))
    h = only_h.coh("h")
    assert cup3(only_h, h, h, h) == 5
    assert cup3(M, M.coh("h"), M.coh("e"), CohClass(2, (0, 0))) == 0
    assert cup3(M, M.coh("h"), M.coh("h"), M.coh("e")) == 1
    with pytest.raises(ValueError):
        cup3(M, M.coh("h"), M.coh("h"), M.coh("pt"))


@given(*(st.lists(rat, min_size=2, max_size=2) for _ in range(4)), rat)
def test_cup3_symmetric_and_trilinear(a, b, c, d, s):
    A, B, C, D = (h2(M, x) for x in (a, b, c, d))
    v = cup3(M, A, B, C)
    for p in ((B, A, C), (C, B, A), (A, C, B), (B, C, A)):
        assert cup3(M, *p) == v
    assert cup3(M, A + s * D, B, C) == v + s * cup3(M, D, B, C)


def test_divisor_pair_examples():
    e, h = M.coh("e"), M.coh("h")
    assert divisor_pair(e, (0, 3)) == 3
    assert divisor_pair(h, (0, 1)) == 0
    assert divisor_pair(2 * h + e, (1, 1)) == 3
    with pytest.raises(ValueError):
        divisor_pair(M.coh("pd_H"), (1, 0))


def test_pullback_examples():
    assert pullback(FLOP, Mf.coh("ef")) == CohClass(2, (0, -1))
    assert pullback(FLOP, Mf.coh("1")) == M.coh("1")
    assert pullback(TR.setup.pullback, TR.Me.coh("hb")) == TR.M.coh("h")
    assert pullback(TR.setup.pullback, TR.Me.coh("pd_Hb")) == TR.M.coh("pd_H")


def test_pullback_rejects_bad_matrices():
    with pytest.raises(ValueError):
        CohPullback(PHI, ((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        CohPullback(PHI, ((1, 0), (0, -1)), on_h2=((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        CohPullback.for_transition(TR.phi_e, ((2,), (0,)))


@given(st.lists(rat, min_size=2, max_size=2), st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_flop_pullback_adjunction(coords, A):
    a = CohClass(2, tuple(coords))
    assert divisor_pair(pullback(FLOP, a), A) == divisor_pair(a, apply_map(PHI, A))


@given(rat, rat, rat)
def test_transition_preserves_420_products(x, y, u):
    """A degree-4 class off the exceptional locus pulls back through the
    right inverse; its product with a divisor and the unit is unchanged."""
    Me, Mt, p = TR.Me, TR.M, TR.setup.pullback
    a2 = CohClass(2, (x,))
    a1 = CohClass(4, (y,))
    one = CohClass(0, (u,))
    lhs = cup_product(Me, a2, a1, one)
    rhs = cup_product(Mt, pullback(p, a2), pullback(p, a1), pullback(p, one))
    assert lhs == rhs


def test_cup_product_degrees():
    assert cup_product(M, M.coh("pt"), M.coh("1"), M.coh("1")) == 1
    assert cup_product(M, M.coh("h"), M.coh("pd_H"), M.coh("1")) == 1
    assert cup_product(M, M.coh("h"), M.coh("pd_E"), M.coh("1")) == 0
    assert cup_product(M, M.coh("pt"), M.coh("h"), M.coh("1")) == 0


def test_model_validation():
    L = HomologyLattice(2, ("H", "E"))
    base = dict(c1=(0, 0), area=(1, 1), effective_cone=((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        ThreefoldModel("X", L, [[[1, 2], [0, 0]], [[0, 0], [0, 0]]], **base)
    with pytest.raises(ValueError):
        ThreefoldModel("X", L, {}, c1=(0, 0), area=(1, 0), effective_cone=((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        ThreefoldModel("X", L, {}, flop_loci=(FlopLocusData((0, -1), 1),), **base)
    with pytest.raises(ValueError):
        ThreefoldModel("X", L, {}, c1=(0, 1), area=(1, 1), effective_cone=((1, 0), (0, 1)),
                       calabi_yau=True)
    with pytest.raises(ValueError):
        FlopLocusData((0, 0), 1)
    with pytest.raises(ValueError):
        CohClass(3, (1,))
    X = ThreefoldModel("X", L, {}, **base)
    assert X.calabi_yau and X.labels() == ("1", "h", "e", "pd_H", "pd_E", "pt")
    with pytest.raises(ValueError):
        X.make(2, (1,))


def test_flop_toy_triples_satisfy_the_cup_correction():
    for a in ("hf", "ef"):
        for b in ("hf", "ef"):
            for c in ("hf", "ef"):
                x, y, z = Mf.coh(a), Mf.coh(b), Mf.coh(c)
                diff = cup3(Mf, x, y, z) - cup3(M, *(pullback(FLOP, v) for v in (x, y, z)))
                assert diff == x.coords[1] * y.coords[1] * z.coords[1]


def test_vdim():
    assert M.vdim((1, 0), 0, 3) == 6
    assert M.vdim((1, 0), 1, 0) == 0
    assert TR.Me.vdim((1,), 0, 0) == 0
    P = ThreefoldModel("P", HomologyLattice(1, ("F",)), {}, (3,), (1,), ((1,),))
    assert P.vdim((1,), 0, 0) == 6 and not P.calabi_yau
    assert Fraction(P.area[0]) == 1
