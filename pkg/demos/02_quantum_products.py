"""
Three-point functions and multiple covers
=========================================

A toy Calabi-Yau with two divisor classes ``h, e`` and one rigid rational
curve ``E``.  Three-point functions combine the cup product, the stored
invariants (reduced by the divisor axiom) and the ``1/k^3`` tail of the
rigid curve, kept in closed form.
"""
from gwsurgery.cohomology import CohClass, cup_product
from gwsurgery.novikov import Truncation, nv_expand, render
from gwsurgery.quantum import QuantumContext, three_point
from gwsurgery.tables import lookup_extended, multiple_cover_value
from gwsurgery.toy import flop_toy

toy = flop_toy()
M = toy.M
h, e = M.coh("h"), M.coh("e")

print("stored genus-0 values:", {A: str(v) for (A, g, ins), v in toy.table.entries.items() if g == 0})
print("k-fold covers of E:", [str(multiple_cover_value(M.flop_loci[0], k)) for k in range(1, 5)])

# three divisor insertions on 2E: (e.2E)^3 / 8 = 1
print("<e,e,e>_{2E} =", lookup_extended(toy.table, (0, 2), 0, ["e", "e", "e"]))

###############################################################################
ctx = QuantumContext(M, toy.table, area_bound=10)
for a, b, c in ((h, h, h), (h, h, e), (e, e, e)):
    F = three_point(ctx, a, b, c)
    print(render(F), "   cup:", cup_product(M, a, b, c))

###############################################################################
# The E-tail of <e,e,e> is the closed form 2 + q^E/(1-q^E); its expansion
# has every coefficient equal to one.
F = three_point(ctx, e, e, e)
print(render(nv_expand(F, Truncation(M.area, 6))))

###############################################################################
# Big quantum product: turn on a bulk class w and sum insertions of w up
# to order J.
big = QuantumContext(M, toy.table, 10, w=CohClass(2, (1, 0)), w_order=2)
print(render(three_point(big, h, h, h)))
