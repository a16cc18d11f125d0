"""JSON model files.

Rationals are persisted as strings ``"p/q"`` (or integers); floats are
rejected.  Objects refer to each other by name.  Every loader error is an
:class:`InputError` carrying the JSON path of the offending field.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cohomology import CohClass, FlopLocusData, ThreefoldModel
from .gluing import CutModel, ZModel
from .lattice import ClassCoset, HomologyLattice, LatticeMap
from .surgery import SurgerySetup, flop_setup, transition_setup
from .tables import GWTable, LogGWTable

SCHEMA_VERSION = "1"
_RATIONAL = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class InputError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message

    def to_json(self) -> dict:
        return {"error": "input", "field": self.field, "message": self.message}


def rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(where, f"expected an exact rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL.match(x.strip()):
        return Fraction(x.strip())
    raise InputError(where, f"malformed rational {x!r}")


def integer(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(where, f"expected an integer, got {x!r}")
    return x


def int_vector(x, where: str) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise InputError(where, "expected a list of integers")
    return tuple(integer(v, f"{where}[{i}]") for i, v in enumerate(x))


def rat_vector(x, where: str) -> tuple[Fraction, ...]:
    if not isinstance(x, list):
        raise InputError(where, "expected a list of rationals")
    return tuple(rational(v, f"{where}[{i}]") for i, v in enumerate(x))


def rat_matrix(x, where: str):
    if not isinstance(x, list):
        raise InputError(where, "expected a matrix")
    return tuple(rat_vector(r, f"{where}[{i}]") for i, r in enumerate(x))


def int_matrix(x, where: str):
    if not isinstance(x, list):
        raise InputError(where, "expected a matrix")
    return tuple(int_vector(r, f"{where}[{i}]") for i, r in enumerate(x))


def rstr(x: Fraction) -> str:
    return str(Fraction(x))


def _get(d: dict, key: str, where: str, default: Any = ...):
    if not isinstance(d, dict):
        raise InputError(where, "expected an object")
    if key not in d:
        if default is ...:
            raise InputError(f"{where}.{key}", "missing field")
        return default
    return d[key]


def _build(where: str, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(where, str(e).strip("'\"")) from None


@dataclass
class ModelFile:
    models: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    gw_tables: dict = field(default_factory=dict)
    log_tables: dict = field(default_factory=dict)
    z_models: dict = field(default_factory=dict)
    cut_models: dict = field(default_factory=dict)
    surgeries: dict = field(default_factory=dict)
    gluings: dict = field(default_factory=dict)
    map_ends: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SurgeryEntry:
    name: str
    setup: SurgerySetup
    map_name: str
    source_table: str
    target_table: str | None = None
    right_inverse: tuple | None = None
    w: CohClass | None = None


@dataclass(frozen=True)
class GluingEntry:
    name: str
    cut: str
    z: str
    plus_table: str
    minus_table: str
    target: ClassCoset
    genus: int
    insertions: tuple = ()
    support_side: str | None = None
    absolute: Fraction | None = None


def _ref(registry: dict, name, where: str, what: str):
    if not isinstance(name, str) or name not in registry:
        raise InputError(where, f"unresolved {what} reference {name!r}")
    return registry[name]


def _named(items, where: str, registry: dict, loader):
    if not isinstance(items, list):
        raise InputError(where, "expected a list")
    for i, item in enumerate(items):
        w = f"{where}[{i}]"
        name = _get(item, "name", w)
        if not isinstance(name, str) or not name:
            raise InputError(f"{w}.name", "expected a non-empty string")
        if name in registry:
            raise InputError(f"{w}.name", f"duplicate name {name!r}")
        registry[name] = loader(item, w)


def load(data: dict) -> ModelFile:
    if not isinstance(data, dict):
        raise InputError("$", "model file must be a JSON object")
    version = _get(data, "schema_version", "$")
    if version != SCHEMA_VERSION:
        raise InputError("$.schema_version", f"unsupported schema version {version!r}")
    mf = ModelFile()

    def model(d, w):
        basis = _get(d, "basis", w)
        if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
            raise InputError(f"{w}.basis", "expected a list of labels")
        exc = [int_vector(v, f"{w}.exceptional[{i}]") for i, v in enumerate(_get(d, "exceptional", w, []))]
        lat = _build(f"{w}.basis", HomologyLattice, len(basis), tuple(basis), tuple(exc))
        triple = {}
        for i, t in enumerate(_get(d, "triple", w)):
            ww = f"{w}.triple[{i}]"
            if not isinstance(t, list) or len(t) != 4:
                raise InputError(ww, "expected [i, j, k, value]")
            idx = int_vector(t[:3], ww)
            if any(not 0 <= x < len(basis) for x in idx):
                raise InputError(ww, "index out of range")
            key = tuple(sorted(idx))
            v = rational(t[3], f"{ww}[3]")
            if key in triple and triple[key] != v:
                raise InputError(ww, f"conflicting entry for {list(key)}")
            triple[key] = v
        loci = []
        for i, l in enumerate(_get(d, "flop_loci", w, [])):
            ww = f"{w}.flop_loci[{i}]"
            loci.append(_build(ww, FlopLocusData, int_vector(_get(l, "gamma", ww), f"{ww}.gamma"),
                               integer(_get(l, "count", ww), f"{ww}.count")))
        kw = {}
        for key in ("h2_labels", "h4_labels"):
            if key in d:
                kw[key] = tuple(d[key])
        return _build(w, ThreefoldModel, d["name"], lat, triple,
                      c1=int_vector(_get(d, "c1", w), f"{w}.c1"),
                      area=rat_vector(_get(d, "area", w), f"{w}.area"),
                      effective_cone=int_matrix(_get(d, "effective_cone", w), f"{w}.effective_cone"),
                      flop_loci=tuple(loci), n=integer(_get(d, "n", w, 2), f"{w}.n"), **kw)

    def lmap(d, w):
        src = _ref(mf.models, _get(d, "source", w), f"{w}.source", "model")
        tgt = _ref(mf.models, _get(d, "target", w), f"{w}.target", "model")
        mf.map_ends[d["name"]] = (d["source"], d["target"])
        return _build(w, LatticeMap, src.lattice, tgt.lattice,
                      int_matrix(_get(d, "matrix", w), f"{w}.matrix"), _get(d, "kind", w))

    def labels(x, where):
        if not isinstance(x, list) or not all(isinstance(l, str) for l in x):
            raise InputError(where, "expected a list of labels")
        return tuple(x)

    def gw_table(d, w):
        m = _ref(mf.models, _get(d, "model", w), f"{w}.model", "model")
        entries = {}
        for i, e in enumerate(_get(d, "entries", w)):
            ww = f"{w}.entries[{i}]"
            key = (int_vector(_get(e, "class", ww), f"{ww}.class"),
                   integer(_get(e, "genus", ww), f"{ww}.genus"),
                   labels(_get(e, "insertions", ww, []), f"{ww}.insertions"))
            entries[key] = rational(_get(e, "value", ww), f"{ww}.value")
        return _build(w, GWTable, m, entries)

    def log_table(d, w):
        m = _ref(mf.models, _get(d, "model", w), f"{w}.model", "model")
        entries = {}
        for i, e in enumerate(_get(d, "entries", w)):
            ww = f"{w}.entries[{i}]"
            ends = tuple(tuple(int_vector(x, f"{ww}.ends[{j}]")) for j, x in enumerate(_get(e, "ends", ww, [])))
            key = (int_vector(_get(e, "class", ww), f"{ww}.class"),
                   integer(_get(e, "genus", ww), f"{ww}.genus"),
                   labels(_get(e, "insertions", ww, []), f"{ww}.insertions"), ends)
            entries[key] = rational(_get(e, "value", ww), f"{ww}.value")
        return _build(w, LogGWTable, d["name"], m, int_vector(_get(d, "z_star", w), f"{w}.z_star"), entries)

    def zmodel(d, w):
        basis = labels(_get(d, "basis", w), f"{w}.basis")
        return _build(w + ".inverse_pairing", ZModel, basis, rat_matrix(_get(d, "pairing", w), f"{w}.pairing"),
                      rat_matrix(_get(d, "inverse_pairing", w), f"{w}.inverse_pairing"))

    def cut(d, w):
        P = _ref(mf.models, _get(d, "plus", w), f"{w}.plus", "model")
        Mi = _ref(mf.models, _get(d, "minus", w), f"{w}.minus", "model")
        a = _get(d, "assembly", w)
        glued = labels(_get(a, "glued_basis", f"{w}.assembly"), f"{w}.assembly.glued_basis")
        src = HomologyLattice(P.h2_rank + Mi.h2_rank,
                              tuple("+" + l for l in P.lattice.basis_labels)
                              + tuple("-" + l for l in Mi.lattice.basis_labels))
        tgt = _build(f"{w}.assembly.glued_basis", HomologyLattice, len(glued), glued)
        asm = _build(f"{w}.assembly.matrix", LatticeMap, src, tgt,
                     int_matrix(_get(a, "matrix", f"{w}.assembly"), f"{w}.assembly.matrix"), "surjection")
        gc1 = d.get("glued_c1")
        return _build(w, CutModel, P, Mi,
                      int_vector(_get(d, "z_star_plus", w), f"{w}.z_star_plus"),
                      int_vector(_get(d, "z_star_minus", w), f"{w}.z_star_minus"), asm,
                      None if gc1 is None else int_vector(gc1, f"{w}.glued_c1"),
                      integer(_get(d, "n", w, 2), f"{w}.n"))

    def surgery(d, w):
        kind = _get(d, "kind", w)
        src = _ref(mf.models, _get(d, "source", w), f"{w}.source", "model")
        tgt = _ref(mf.models, _get(d, "target", w), f"{w}.target", "model")
        map_name = _get(d, "map", w)
        phi = _ref(mf.maps, map_name, f"{w}.map", "map")
        st = _get(d, "source_table", w)
        _ref(mf.gw_tables, st, f"{w}.source_table", "gw table")
        tt = d.get("target_table")
        if tt is not None:
            _ref(mf.gw_tables, tt, f"{w}.target_table", "gw table")
        R = None
        wcls = None
        if kind == "flop":
            setup = _build(w, flop_setup, src, tgt, phi)
        elif kind == "transition":
            R = rat_matrix(_get(d, "right_inverse", w), f"{w}.right_inverse")
            setup = _build(f"{w}.right_inverse", transition_setup, src, tgt, phi, R)
            if "w" in d:
                ww = _get(d, "w", w)
                wcls = _build(f"{w}.w", tgt.make, integer(_get(ww, "degree", f"{w}.w"), f"{w}.w.degree"),
                              rat_vector(_get(ww, "coords", f"{w}.w"), f"{w}.w.coords"))
        else:
            raise InputError(f"{w}.kind", f"unknown surgery kind {kind!r}")
        return SurgeryEntry(d["name"], setup, map_name, st, tt, R, wcls)

    def gluing(d, w):
        _ref(mf.cut_models, _get(d, "cut", w), f"{w}.cut", "cut model")
        _ref(mf.z_models, _get(d, "z", w), f"{w}.z", "Z model")
        _ref(mf.log_tables, _get(d, "plus_table", w), f"{w}.plus_table", "log table")
        _ref(mf.log_tables, _get(d, "minus_table", w), f"{w}.minus_table", "log table")
        t = _get(d, "target", w)
        coset = _build(f"{w}.target", ClassCoset, int_vector(_get(t, "class", f"{w}.target"), f"{w}.target.class"),
                       int_matrix(_get(t, "kernel", f"{w}.target", []), f"{w}.target.kernel"))
        ins = []
        for i, p in enumerate(_get(d, "insertions", w, [])):
            ins.append(labels(p, f"{w}.insertions[{i}]"))
            if len(ins[-1]) != 2:
                raise InputError(f"{w}.insertions[{i}]", "expected [plus label, minus label]")
        side = d.get("support_side")
        if side not in (None, "plus", "minus"):
            raise InputError(f"{w}.support_side", f"expected plus or minus, got {side!r}")
        absolute = d.get("absolute")
        return GluingEntry(d["name"], d["cut"], d["z"], d["plus_table"], d["minus_table"], coset,
                           integer(_get(d, "genus", w, 0), f"{w}.genus"), tuple(ins), side,
                           None if absolute is None else rational(absolute, f"{w}.absolute"))

    _named(_get(data, "models", "$"), "$.models", mf.models, model)
    _named(data.get("maps", []), "$.maps", mf.maps, lmap)
    _named(data.get("gw_tables", []), "$.gw_tables", mf.gw_tables, gw_table)
    _named(data.get("log_tables", []), "$.log_tables", mf.log_tables, log_table)
    _named(data.get("z_models", []), "$.z_models", mf.z_models, zmodel)
    _named(data.get("cut_models", []), "$.cut_models", mf.cut_models, cut)
    _named(data.get("surgeries", []), "$.surgeries", mf.surgeries, surgery)
    _named(data.get("gluings", []), "$.gluings", mf.gluings, gluing)
    return mf


def loads(text: str) -> ModelFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("$", f"invalid JSON: {e}") from None
    return load(data)


# serialization ------------------------------------------------------------

def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dump_model(m: ThreefoldModel) -> dict:
    r = m.h2_rank
    triple = [[i, j, k, rstr(m.triple[i][j][k])]
              for i in range(r) for j in range(i, r) for k in range(j, r) if m.triple[i][j][k]]
    return {
        "name": m.name,
        "basis": list(m.lattice.basis_labels),
        "exceptional": [list(c) for c in m.lattice.exceptional_classes],
        "triple": triple,
        "c1": list(m.c1),
        "area": [rstr(a) for a in m.area],
        "effective_cone": [list(g) for g in m.effective_cone],
        "flop_loci": [{"gamma": list(l.gamma), "count": l.count} for l in m.flop_loci],
        "n": m.n,
        "h2_labels": list(m.h2_labels),
        "h4_labels": list(m.h4_labels),
    }


def dump_map(name: str, src: str, tgt: str, m: LatticeMap) -> dict:
    return {"name": name, "source": src, "target": tgt,
            "matrix": [list(r) for r in m.matrix], "kind": m.kind}


def dump_gw_table(name: str, t: GWTable) -> dict:
    return {"name": name, "model": t.model.name, "entries": [
        {"class": list(A), "genus": g, "insertions": list(l), "value": rstr(v)}
        for (A, g, l), v in sorted(t.entries.items())]}


def dump_log_table(t: LogGWTable) -> dict:
    return {"name": t.pair_name, "model": t.model.name, "z_star": list(t.z_star), "entries": [
        {"class": list(A), "genus": g, "insertions": list(l), "ends": [list(e) for e in ends],
         "value": rstr(v)}
        for (A, g, l, ends), v in sorted(t.entries.items())]}


def dump_zmodel(name: str, z: ZModel) -> dict:
    return {"name": name, "basis": list(z.basis),
            "pairing": [[rstr(x) for x in r] for r in z.pairing],
            "inverse_pairing": [[rstr(x) for x in r] for r in z.inverse_pairing]}


def dump_cut(name: str, c: CutModel) -> dict:
    d = {"name": name, "plus": c.plus_model.name, "minus": c.minus_model.name,
         "z_star_plus": list(c.z_star_plus), "z_star_minus": list(c.z_star_minus),
         "assembly": {"glued_basis": list(c.assembly.target.basis_labels),
                      "matrix": [list(r) for r in c.assembly.matrix]},
         "n": c.n}
    if c.glued_c1 is not None:
        d["glued_c1"] = list(c.glued_c1)
    return d


def dump_surgery(s: SurgeryEntry) -> dict:
    d = {"name": s.name, "kind": s.setup.kind, "source": s.setup.source_model.name,
         "target": s.setup.target_model.name, "map": s.map_name, "source_table": s.source_table}
    if s.target_table is not None:
        d["target_table"] = s.target_table
    if s.right_inverse is not None:
        d["right_inverse"] = [[rstr(x) for x in r] for r in s.right_inverse]
    if s.w is not None:
        d["w"] = {"degree": s.w.degree, "coords": [rstr(x) for x in s.w.coords]}
    return d


def dump_gluing(g: GluingEntry) -> dict:
    d = {"name": g.name, "cut": g.cut, "z": g.z, "plus_table": g.plus_table,
         "minus_table": g.minus_table, "genus": g.genus,
         "target": {"class": list(g.target.representative),
                    "kernel": [list(k) for k in g.target.kernel_basis]},
         "insertions": [list(p) for p in g.insertions]}
    if g.support_side is not None:
        d["support_side"] = g.support_side
    if g.absolute is not None:
        d["absolute"] = rstr(g.absolute)
    return d


def dump(mf: ModelFile) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "models": [dump_model(m) for m in mf.models.values()],
        "maps": [dump_map(n, *mf.map_ends[n], m) for n, m in mf.maps.items()],
        "gw_tables": [dump_gw_table(n, t) for n, t in mf.gw_tables.items()],
        "log_tables": [dump_log_table(t) for t in mf.log_tables.values()],
        "z_models": [dump_zmodel(n, z) for n, z in mf.z_models.items()],
        "cut_models": [dump_cut(n, c) for n, c in mf.cut_models.items()],
        "surgeries": [dump_surgery(s) for s in mf.surgeries.values()],
        "gluings": [dump_gluing(g) for g in mf.gluings.values()],
    }


build_call = _build
