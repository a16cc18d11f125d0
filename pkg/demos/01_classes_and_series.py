"""
Curve classes and Novikov series
================================

Curve classes are integer vectors in a lattice with a positive area
functional.  A generating series in the Novikov variables ``q^A`` is kept
exactly: a polynomial part plus closed-form atoms ``c q^G / (1 - q^G)``.
"""
from gwsurgery.lattice import HomologyLattice, cone_points, make_flop_map
from gwsurgery.novikov import (NovikovSeries, Truncation, ac_normal_form, nv_ac_equal,
                               nv_expand, nv_substitute, parse, render)

L = HomologyLattice(2, ("H", "E"), ((0, 1),))
Lf = HomologyLattice(2, ("Hf", "Ef"), ((0, 1),))

# effective classes of area <= 6 when area(H) = 4, area(E) = 1
print(cone_points(((1, 0), (0, 1)), (4, 1), 6))

# the flop sends E to -Ef and fixes the complementary basis vector
phi = make_flop_map(L, Lf, [(0, 0)])
print(phi.matrix, phi((1, 2)))

###############################################################################
# A single conifold curve contributes the geometric series in ``q^E``.
# Expanding it to a finite area shows the coefficients.
F = NovikovSeries.atom((0, 1)) + NovikovSeries.monomial((1, 0), 3)
print(render(F))
print(render(nv_expand(F, Truncation((4, 1), 5))))

###############################################################################
# After the flop, ``q^E`` becomes ``q^(-Ef)``: the atom now points the wrong
# way.  Analytic continuation rewrites it as ``-1 - atom(Ef)``, which is
# how a constant appears on the other side.
G = nv_substitute(F, phi)
print(render(G))
print(render(ac_normal_form(G, (1, 1))))
print(nv_ac_equal(NovikovSeries.atom((0, 1)) + NovikovSeries.atom((0, -1)),
                  NovikovSeries.constant(2, -1)))

###############################################################################
# Series round-trip through text.
text = "1/2*G([0,1]) - q^[1,0] + 5"
assert render(parse(text)) == render(parse(render(parse(text))))
print(render(parse(text)))
