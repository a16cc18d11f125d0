"""
Splitting types and the gluing sum
==================================

Cut the glued manifold into a projective-bundle piece ``P`` and a
complement ``Mb`` meeting along ``Z``.  A broken curve is a bipartite graph
of side components joined at ends with contact orders; its contribution
contracts the side log invariants through the inverse pairing on ``Z``.
"""
from gwsurgery.gluing import (enumerate_splittings, gluing_sum, gluing_sum_bruteforce,
                              side_index, total_invariant, vanishing_filter)
from gwsurgery.toy import gluing_toy

toy = gluing_toy()
cut = toy.cut

types = enumerate_splittings(cut, toy.target, g=0, m=0, area_bound=10)
for t in types:
    print([(c.side, c.A, c.ends) for c in t.components], t.edges)
    if not t.is_pure:
        print("   index plus/minus:", side_index(cut, t, "plus"), side_index(cut, t, "minus"))
    print("   value:", gluing_sum(t, toy.plus, toy.minus, toy.z),
          "brute:", gluing_sum_bruteforce(t, toy.plus, toy.minus, toy.z))

###############################################################################
# With insertions supported on the minus side, a mixed type needs enough
# index there; the fiber type has minus index -2 and is discarded.
kept = vanishing_filter(types, [], "minus", cut)
print(len(types), "->", len(kept))
print(total_invariant(cut, toy.target, 0, 0, toy.plus, toy.minus, toy.z, support_side="minus"))
