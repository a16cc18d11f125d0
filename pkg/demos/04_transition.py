"""
Pushing invariants through a small transition
=============================================

Contracting ``E`` and smoothing leaves a rank-one lattice.  An invariant
in class ``B`` downstairs is the sum over the fiber of upstairs classes
``A`` with ``phi_e(A) = B``.  Terms supported on multiples of the
contracted curve form a separate block that has to vanish.
"""
from gwsurgery.lattice import fiber_classes
from gwsurgery.novikov import render
from gwsurgery.surgery import transition_transform, verify_transition_qc
from gwsurgery.toy import transition_toy

toy = transition_toy()
s = toy.setup
# classes with no stored value count as zero
print("fiber over Hb:", fiber_classes(toy.phi_e, (1,), toy.M.area, 8, toy.M.effective_cone))

Te = transition_transform(toy.table, s, 8)
for key, v in sorted(Te.entries.items()):
    print(key, v)

###############################################################################
w = toy.Me.coh("hb")
rep = verify_transition_qc(s, toy.table, Te, bound=8, w=w, w_order=2)
print("verdict:", rep.verdict)
for wit in rep.witnesses[:2]:
    print(wit.triple, render(wit.lhs), "| block zero:", wit.block_zero)
print(rep.notes)
