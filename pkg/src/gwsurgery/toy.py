"""Small hand-built models used by the demos, the CLI fixtures and the tests.

All data are exact.  The flop pair has one conifold locus ``E -> -E_f``;
its triple tensors satisfy the flop correction of the cup product.  The
transition contracts ``E`` and keeps ``H``.  The cut model has a projective
bundle piece whose fibers meet the divisor once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cohomology import FlopLocusData, ThreefoldModel
from .gluing import CutModel, ZModel
from .lattice import ClassCoset, HomologyLattice, LatticeMap, make_flop_map
from .surgery import SurgerySetup, flop_setup, transition_setup
from .tables import GWTable, LogGWTable

# genus-0 base values, no insertions; the divisor axiom supplies the rest
FLOP_BASE = {(1, 0): 3, (1, 1): -2, (2, 0): Fraction(5, 2), (1, 2): 7}
TRANSITION_FIBER = {k: v for k, v in enumerate((3, -2, 5, 1, 7))}


@dataclass(frozen=True)
class FlopToy:
    M: ThreefoldModel
    Mf: ThreefoldModel
    phi: LatticeMap
    setup: SurgerySetup
    table: GWTable


@dataclass(frozen=True)
class TransitionToy:
    M: ThreefoldModel
    Me: ThreefoldModel
    phi_e: LatticeMap
    right_inverse: tuple
    setup: SurgerySetup
    table: GWTable


@dataclass(frozen=True)
class GluingToy:
    cut: CutModel
    z: ZModel
    plus: LogGWTable
    minus: LogGWTable
    target: ClassCoset


def flop_models(count: int = 1, count_f: int | None = None, eee_f=-1):
    L = HomologyLattice(2, ("H", "E"), ((0, 1),))
    Lf = HomologyLattice(2, ("Hf", "Ef"), ((0, 1),))
    M = ThreefoldModel(
        "M", L, {(0, 0, 0): 5, (0, 0, 1): 1, (0, 1, 1): -2, (1, 1, 1): 2},
        c1=(0, 0), area=(4, 1), effective_cone=((1, 0), (0, 1)),
        flop_loci=(FlopLocusData((0, 1), count),))
    Mf = ThreefoldModel(
        "Mf", Lf, {(0, 0, 0): 5, (0, 0, 1): -1, (0, 1, 1): -2, (1, 1, 1): eee_f},
        c1=(0, 0), area=(4, 1), effective_cone=((1, -2), (0, 1)),
        flop_loci=(FlopLocusData((0, 1), count if count_f is None else count_f),))
    return M, Mf, make_flop_map(L, Lf, [(0, 0)])


def flop_toy(**kw) -> FlopToy:
    M, Mf, phi = flop_models(**kw)
    entries = {(A, 0, ()): v for A, v in FLOP_BASE.items()}
    entries[((1, 0), 1, ())] = Fraction(1, 12)
    return FlopToy(M, Mf, phi, flop_setup(M, Mf, phi), GWTable(M, entries))


def transition_toy(fiber=None) -> TransitionToy:
    fiber = TRANSITION_FIBER if fiber is None else fiber
    L = HomologyLattice(2, ("H", "E"), ((0, 1),))
    Le = HomologyLattice(1, ("Hb",))
    M = ThreefoldModel(
        "M", L, {(0, 0, 0): 5, (0, 1, 1): -1, (1, 1, 1): 2},
        c1=(0, 0), area=(1, 1), effective_cone=((1, 0), (0, 1)),
        flop_loci=(FlopLocusData((0, 1), 1),))
    Me = ThreefoldModel("Me", Le, {(0, 0, 0): 5}, c1=(0,), area=(1,), effective_cone=((1,),))
    phi_e = LatticeMap(L, Le, ((1, 0),), "surjection")
    R = ((1,), (0,))
    table = GWTable(M, {((1, k), 0, ()): v for k, v in fiber.items()})
    return TransitionToy(M, Me, phi_e, R, transition_setup(M, Me, phi_e, R), table)


def gluing_toy(pure=Fraction(7, 2), mixed_plus=2, mixed_minus=3) -> GluingToy:
    P = ThreefoldModel(
        "P", HomologyLattice(2, ("G", "F")), {}, c1=(0, 3), area=(1, 1),
        effective_cone=((1, 0), (0, 1)))
    Mb = ThreefoldModel(
        "Mb", HomologyLattice(2, ("Cb", "f")), {}, c1=(0, 1), area=(5, 1),
        effective_cone=((1, -1), (0, 1)))
    glued = HomologyLattice(2, ("G", "C"))
    assembly = LatticeMap(HomologyLattice(4, ("G+", "F+", "Cb-", "f-")), glued,
                          ((1, 0, 0, 0), (0, 0, 1, 0)), "surjection")
    cut = CutModel(P, Mb, (0, 1), (0, -1), assembly, glued_c1=(0, 0))
    z = ZModel.from_pairing(("z1", "z2"), ((0, 1), (1, 0)))
    plus = LogGWTable("P|Z", P, (0, 1), {((0, 1), 0, (), ((1, 0),)): mixed_plus})
    minus = LogGWTable("Mb|Z", Mb, (0, -1), {
        ((1, 0), 0, (), ()): pure,
        ((1, -1), 0, (), ((1, 1),)): mixed_minus,
    })
    return GluingToy(cut, z, plus, minus, ClassCoset((0, 1)))


def toy_model_file():
    """Every toy in one :class:`~gwsurgery.modelfile.ModelFile`."""
    from .modelfile import GluingEntry, ModelFile, SurgeryEntry
    from .surgery import flop_transform

    f, t, g = flop_toy(), transition_toy(), gluing_toy()
    mf = ModelFile()
    for m in (f.M, f.Mf):
        mf.models["flop_" + m.name] = m
    for m in (t.M, t.Me):
        mf.models["tr_" + m.name] = m
    mf.models["P"] = g.cut.plus_model
    mf.models["Mb"] = g.cut.minus_model
    # model names inside the file must match registry keys
    mf.models = {k: _renamed(m, k) for k, m in mf.models.items()}
    M, Mf = mf.models["flop_M"], mf.models["flop_Mf"]
    Mt, Me = mf.models["tr_M"], mf.models["tr_Me"]
    phi = LatticeMap(M.lattice, Mf.lattice, f.phi.matrix, "iso")
    phi_e = LatticeMap(Mt.lattice, Me.lattice, t.phi_e.matrix, "surjection")
    mf.maps["phi"], mf.map_ends["phi"] = phi, ("flop_M", "flop_Mf")
    mf.maps["phi_e"], mf.map_ends["phi_e"] = phi_e, ("tr_M", "tr_Me")
    fs = flop_setup(M, Mf, phi)
    src = GWTable(M, f.table.entries)
    mf.gw_tables["flop_M_table"] = src
    mf.gw_tables["flop_Mf_table"] = flop_transform(src, fs, 10)
    mf.gw_tables["tr_M_table"] = GWTable(Mt, t.table.entries)
    mf.surgeries["toy_flop"] = SurgeryEntry("toy_flop", fs, "phi", "flop_M_table", "flop_Mf_table")
    ts = transition_setup(Mt, Me, phi_e, t.right_inverse)
    mf.surgeries["toy_transition"] = SurgeryEntry(
        "toy_transition", ts, "phi_e", "tr_M_table", None, t.right_inverse, Me.coh("hb"))
    cut = g.cut
    mf.log_tables[g.plus.pair_name] = g.plus
    mf.log_tables[g.minus.pair_name] = g.minus
    mf.z_models["Z"] = g.z
    mf.cut_models["toy_cut"] = CutModel(
        cut.plus_model, cut.minus_model, cut.z_star_plus, cut.z_star_minus,
        LatticeMap(HomologyLattice(4, ("+G", "+F", "-Cb", "-f")), cut.assembly.target,
                   cut.assembly.matrix, "surjection"), cut.glued_c1, cut.n)
    mf.gluings["toy_glue"] = GluingEntry(
        "toy_glue", "toy_cut", "Z", g.plus.pair_name, g.minus.pair_name, g.target, 0, (),
        "minus", g.minus.entries[((1, 0), 0, (), ())])
    return mf


def _renamed(m: ThreefoldModel, name: str) -> ThreefoldModel:
    if m.name == name:
        return m
    from dataclasses import replace
    return replace(m, name=name, triple=m.triple)
