"""Flop and small-transition transforms of GW tables, and executable checks
that the quantum 3-point functions match after the change of variables
``q^A -> q^{phi(A)}``."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .cohomology import CohPullback, ThreefoldModel, cup3, pullback
from .lattice import LatticeMap, apply_map, fiber_classes, multiple_of, pair, scale
from .novikov import NovikovSeries, nv_ac_equal, nv_substitute, render
from .quantum import QuantumContext, locus_terms, on_locus, three_point, window
from .tables import GWTable, _divisor_factor, _divisor_split, lookup_extended


class InconsistentModelError(ValueError):
    """User-supplied model data contradicts a required identity."""


@dataclass(frozen=True)
class SurgerySetup:
    kind: str
    source_model: ThreefoldModel
    target_model: ThreefoldModel
    h2_map: LatticeMap
    pullback: CohPullback
    locus_pairs: tuple = ()

    def __post_init__(self):
        M, T, phi = self.source_model, self.target_model, self.h2_map
        if phi.source != M.lattice or phi.target != T.lattice:
            raise ValueError("H_2 map does not connect the two models")
        if self.pullback.h2_map != phi:
            raise ValueError("pullback is built on a different H_2 map")
        if self.kind == "flop":
            if phi.kind != "iso":
                raise ValueError("a flop needs an isomorphism on H_2")
            pairs = []
            target_loci = {l.gamma for l in T.flop_loci}
            for locus in M.flop_loci:
                gf = tuple(-x for x in apply_map(phi, locus.gamma))
                if gf not in target_loci:
                    raise ValueError(f"phi({locus.gamma}) = -{gf} is not a flop locus of {T.name}")
                pairs.append((locus.gamma, gf, locus.count))
            if self.locus_pairs and tuple(self.locus_pairs) != tuple(pairs):
                raise ValueError("locus_pairs disagree with phi(Gamma) = -Gamma_f")
            object.__setattr__(self, "locus_pairs", tuple(pairs))
        elif self.kind == "transition":
            if phi.kind != "surjection":
                raise ValueError("a transition needs a surjection on H_2")
            if T.flop_loci:
                raise ValueError("the smoothed side of a transition carries no exceptional loci")
        else:
            raise ValueError(f"unknown surgery kind {self.kind!r}")


def flop_setup(M: ThreefoldModel, Mf: ThreefoldModel, phi: LatticeMap) -> SurgerySetup:
    return SurgerySetup("flop", M, Mf, phi, CohPullback.for_flop(phi))


def inverse_flop_setup(s: SurgerySetup) -> SurgerySetup:
    return flop_setup(s.target_model, s.source_model, s.h2_map.inverse())


def transition_setup(M: ThreefoldModel, Me: ThreefoldModel, phi_e: LatticeMap,
                     right_inverse) -> SurgerySetup:
    return SurgerySetup("transition", M, Me, phi_e, CohPullback.for_transition(phi_e, right_inverse))


def _label_patterns(model: ThreefoldModel, degrees):
    """All sorted label tuples with the given multiset of degrees."""
    by_deg = {}
    for l in model.labels():
        by_deg.setdefault(model.label_degree(l), []).append(l)
    counts = {}
    for d in degrees:
        counts[d] = counts.get(d, 0) + 1
    pools = [list(combinations_with_replacement(by_deg[d], c)) for d, c in sorted(counts.items())]
    for parts in product(*pools):
        yield tuple(l for part in parts for l in part)


def _reduced(model, A, labels):
    """Divisor-reduced label pattern of an entry, when the reduction is
    invertible (nonzero divisor factor)."""
    if any(A):
        D, R = _divisor_split(model, labels)
        if D and _divisor_factor(model, D, A):
            return R
    return labels


def flop_transform(t: GWTable, s: SurgerySetup, bound, flagged: list | None = None) -> GWTable:
    """Transport a table across a flop.

    Classes off the exceptional rays go by ``Psi^Mf_(phi A)(alpha) =
    Psi^M_A(phi^* alpha)``; classes ``k Gamma`` go to ``k Gamma_f`` with no
    insertions.  Entries with no defined transport are appended to
    ``flagged``.
    """
    if s.kind != "flop":
        raise ValueError("flop_transform needs a flop setup")
    M, Mf = s.source_model, s.target_model
    if t.model != M:
        raise ValueError("table does not belong to the flop source")
    bound = Fraction(bound)
    out = {}
    for (A, g, labels), v in sorted(t.entries.items()):
        if not v or pair(M.area, A) > bound:
            continue
        if not any(A):
            _flag(flagged, (A, g, labels), "classical term; not transported")
            continue
        locus = next(((gm, gf) for gm, gf, _ in s.locus_pairs if multiple_of(A, gm)), None)
        if locus is not None:
            k = multiple_of(A, locus[0])
            D, R = _divisor_split(M, labels)
            if R:
                _flag(flagged, (A, g, labels), "exceptional class with higher-degree insertions")
                continue
            base = lookup_extended(t, A, g, [])
            if D and not _divisor_factor(M, D, A):
                _flag(flagged, (A, g, labels), "exceptional class with vanishing divisor factor")
                continue
            out[(scale(k, locus[1]), g, ())] = base
            continue
        B = apply_map(s.h2_map, A)
        R = _reduced(M, A, labels)
        for target_labels in _label_patterns(Mf, [Mf.label_degree(l) for l in _relabel(M, Mf, R)]):
            val = lookup_extended(t, A, g, [pullback(s.pullback, Mf.coh(l)) for l in target_labels])
            if val:
                out[(B, g, target_labels)] = val
    return GWTable(Mf, out)


def _relabel(M, T, labels):
    # degree signature only; names are per-model
    return [{0: "1", 2: T.h2_labels[0], 4: T.h4_labels[0], 6: "pt"}[M.label_degree(l)] for l in labels]


def _flag(flagged, key, why):
    if flagged is not None:
        flagged.append((key, why))


def transition_value(t: GWTable, s: SurgerySetup, B, g, insertions, bound,
                     absent: set | None = None) -> Fraction:
    """``Psi^Me_(B,g,m)(alpha) = sum over phi_e(A) = B of Psi^M_(A,g,m)(phi^* alpha)``."""
    if s.kind != "transition":
        raise ValueError("transition_value needs a transition setup")
    M, Me = s.source_model, s.target_model
    B = Me.lattice.check(B)
    if not any(B):
        raise ValueError("the transition formula only holds for B != 0")
    fiber = fiber_classes(s.h2_map, B, M.area, bound, M.effective_cone)
    ins = [pullback(s.pullback, Me.coh(a) if isinstance(a, str) else a) for a in insertions]
    if not fiber:
        if absent is not None:
            absent.add((B, g, tuple(a if isinstance(a, str) else "?" for a in insertions)))
        return Fraction(0)
    return sum((lookup_extended(t, A, g, ins, absent) for A in fiber), Fraction(0))


def transition_transform(t: GWTable, s: SurgerySetup, bound, flagged: list | None = None) -> GWTable:
    if s.kind != "transition":
        raise ValueError("transition_transform needs a transition setup")
    M, Me = s.source_model, s.target_model
    if t.model != M:
        raise ValueError("table does not belong to the transition source")
    bound = Fraction(bound)
    cone = set(M.cone_points(bound))
    patterns = {}
    for (A, g, labels), v in sorted(t.entries.items()):
        if not v or pair(M.area, A) > bound:
            continue
        B = apply_map(s.h2_map, A)
        if not any(B):
            _flag(flagged, (A, g, labels), "class contracted by the transition")
            continue
        if A not in cone:
            _flag(flagged, (A, g, labels), "class outside the effective cone; not in any fiber")
            continue
        R = _reduced(M, A, labels)
        patterns.setdefault(B, set()).add((g, tuple(sorted(M.label_degree(l) for l in R))))
    out = {}
    for B in sorted(patterns):
        for g, degs in sorted(patterns[B]):
            for target_labels in _label_patterns(Me, degs):
                val = transition_value(t, s, B, g, target_labels, bound)
                if val:
                    out[(B, g, target_labels)] = val
    return GWTable(Me, out)


def cup_correction(s: SurgerySetup, a1, a2, a3) -> Fraction:
    """``cup_Mf(a1 a2 a3) - cup_M(phi^* a1 phi^* a2 phi^* a3)``, checked against
    the sum over flop loci of ``n * a1(Gamma_f) a2(Gamma_f) a3(Gamma_f)``."""
    if s.kind != "flop":
        raise ValueError("cup_correction needs a flop setup")
    M, Mf = s.source_model, s.target_model
    ins = [Mf.coh(a) if isinstance(a, str) else a for a in (a1, a2, a3)]
    diff = cup3(Mf, *ins) - cup3(M, *(pullback(s.pullback, a) for a in ins))
    expected = Fraction(0)
    for _, gf, n in s.locus_pairs:
        term = Fraction(n)
        for a in ins:
            term *= pair(a.coords, gf)
        expected += term
    if diff != expected:
        raise InconsistentModelError(
            f"cup products differ by {diff}, but the flop loci predict {expected}")
    return diff


# verification -------------------------------------------------------------

@dataclass
class Witness:
    triple: tuple[str, str, str]
    lhs: NovikovSeries
    rhs: NovikovSeries
    equal: bool
    block_zero: bool = True

    def to_json(self) -> dict:
        d = {"triple": list(self.triple), "lhs": render(self.lhs), "rhs": render(self.rhs),
             "equal": self.equal}
        if not self.block_zero:
            d["contracted_block_zero"] = False
        return d


@dataclass
class VerificationReport:
    kind: str
    mode: str
    checked_order: Fraction
    w_order: int
    witnesses: list = field(default_factory=list)
    absent_flags: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(w.equal and w.block_zero for w in self.witnesses)

    def failures(self) -> list:
        return [w for w in self.witnesses if not (w.equal and w.block_zero)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "verdict": self.verdict,
            "checked_order": str(self.checked_order),
            "w_order": self.w_order,
            "witnesses": [w.to_json() for w in self.witnesses],
            "absent_flags": [_key_json(k) for k in self.absent_flags],
            "notes": list(self.notes),
        }


def _key_json(key):
    return [list(x) if isinstance(x, tuple) else x for x in key]


def _triples(model):
    return list(combinations_with_replacement(model.labels(), 3))


def verify_flop_qc(s: SurgerySetup, table: GWTable, target_table: GWTable | None = None,
                   bound=10) -> VerificationReport:
    """Compare ``Psi^Mf(a1, a2, a3)`` with ``Psi^M(phi^* a1, phi^* a2, phi^* a3)``
    after ``q^A -> q^{phi(A)}``, for every basis triple on the flopped side.

    Without ``target_table`` the flopped table is generated by
    :func:`flop_transform` ("generate" mode); otherwise it is checked as given.
    """
    if s.kind != "flop":
        raise ValueError("verify_flop_qc needs a flop setup")
    M, Mf, phi = s.source_model, s.target_model, s.h2_map
    bound = Fraction(bound)
    mode = "check"
    notes = []
    if target_table is None:
        mode = "generate"
        flagged = []
        target_table = flop_transform(table, s, bound, flagged)
        notes += [f"not transported: {list(k[0])} g={k[1]} {list(k[2])}: {why}" for k, why in flagged]
    ctx = QuantumContext(M, table, bound)
    ctx_f = QuantumContext(Mf, target_table, bound)
    inv = phi.inverse()
    W = set(window(ctx_f)) | {apply_map(phi, A) for A in window(ctx)}
    W = sorted(B for B in W if not on_locus(Mf, B) and not on_locus(M, apply_map(inv, B)))
    W_src = [apply_map(inv, B) for B in W]
    report = VerificationReport("flop", mode, bound, 0, notes=notes)
    absent = set()
    for triple in _triples(Mf):
        ins = [Mf.coh(l) for l in triple]
        lhs = three_point(ctx_f, *ins, classes=W, absent=absent)
        pulled = [pullback(s.pullback, a) for a in ins]
        rhs = nv_substitute(three_point(ctx, *pulled, classes=W_src, absent=absent), phi)
        report.witnesses.append(Witness(triple, lhs, rhs, nv_ac_equal(lhs, rhs)))
    report.absent_flags = sorted(absent, key=repr)
    return report


def verify_transition_qc(s: SurgerySetup, table: GWTable, target_table: GWTable | None = None,
                         bound=8, w=None, w_order: int = 0) -> VerificationReport:
    """Compare ``Psi^Me_w(a1, a2, a3)`` with ``Psi^M_{phi^* w}(phi^* a_i)`` after
    ``q^A -> q^{phi_e(A)}``.  Terms along the contracted classes are checked
    to vanish separately and excluded from the comparison."""
    if s.kind != "transition":
        raise ValueError("verify_transition_qc needs a transition setup")
    M, Me, phi = s.source_model, s.target_model, s.h2_map
    bound = Fraction(bound)
    mode = "check"
    notes = ["H^4 pullback uses the right inverse "
             + str([[str(x) for x in row] for row in s.pullback.on_h4])]
    if target_table is None:
        mode = "generate"
        flagged = []
        target_table = transition_transform(table, s, bound, flagged)
        notes += [f"not transported: {list(k[0])} g={k[1]} {list(k[2])}: {why}" for k, why in flagged]
    if w is not None:
        w = Me.coh(w) if isinstance(w, str) else w
    w_src = pullback(s.pullback, w) if w is not None else None
    ctx = QuantumContext(M, table, bound, w_src, w_order)
    ctx_e = QuantumContext(Me, target_table, bound, w, w_order)
    W = set(window(ctx_e)) | {apply_map(phi, A) for A in window(ctx)}
    W = sorted(B for B in W if any(B))
    Wset = set(W)
    W_src = sorted(A for A in table.support(genus=0) | set(window(ctx))
                   if any(A) and not on_locus(M, A) and apply_map(phi, A) in Wset)
    contracted = sorted(A for A in table.support(genus=0)
                        if any(A) and not any(apply_map(phi, A)) and not on_locus(M, A))
    report = VerificationReport("transition", mode, bound, w_order, notes=notes)
    absent = set()
    for triple in _triples(Me):
        ins = [Me.coh(l) for l in triple]
        pulled = [pullback(s.pullback, a) for a in ins]
        block = [c for locus in M.flop_loci for _, c in locus_terms(ctx, locus, pulled, absent=absent)]
        block += [lookup for A in contracted
                  for lookup in [_coef(ctx, A, pulled, absent)]]
        lhs = three_point(ctx_e, *ins, classes=W, absent=absent)
        src = three_point(ctx, *pulled, classes=W_src, absent=absent, tails=False)
        rhs = nv_substitute(src, phi)
        report.witnesses.append(Witness(triple, lhs, rhs, nv_ac_equal(lhs, rhs),
                                        block_zero=not any(block)))
    report.absent_flags = sorted(absent, key=repr)
    return report


def _coef(ctx, A, ins, absent):
    from .quantum import coefficient
    return coefficient(ctx, A, ins, absent)
