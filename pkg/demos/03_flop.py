"""
Transporting invariants across a flop
=====================================

Invariants of classes away from the flopping curve move by the lattice
isomorphism.  The cup product changes by the curve count times the cube of
the pairing, and analytic continuation of the curve's tail repairs exactly
that change, so the small quantum products agree.
"""
from gwsurgery.novikov import render
from gwsurgery.surgery import cup_correction, flop_setup, flop_transform, verify_flop_qc
from gwsurgery.tables import GWTable
from gwsurgery.toy import flop_models, flop_toy

toy = flop_toy()
s = toy.setup

flagged = []
Tf = flop_transform(toy.table, s, 10, flagged)
for key, v in sorted(Tf.entries.items()):
    print(key, v)
for key, why in flagged:
    print("flagged", key, "-", why)

###############################################################################
# cup_f(ef, ef, ef) - cup(phi* ef, ...) = n * (ef.Ef)^3
print(cup_correction(s, "ef", "ef", "ef"), cup_correction(s, "hf", "hf", "ef"))

###############################################################################
rep = verify_flop_qc(s, toy.table, Tf, bound=10)
print("verdict:", rep.verdict, "over", len(rep.witnesses), "triples")
w = next(w for w in rep.witnesses if w.triple == ("ef", "ef", "ef"))
print("lhs:", render(w.lhs))
print("rhs:", render(w.rhs))

###############################################################################
# Double the curve count on the flopped side only: the cube correction no
# longer matches and the check reports which triples break.
M, Mf, phi = flop_models(count=1, count_f=2, eee_f=0)
bad = verify_flop_qc(flop_setup(M, Mf, phi), GWTable(M, toy.table.entries), bound=10)
print("verdict:", bad.verdict, [w.triple for w in bad.failures()][:4])
