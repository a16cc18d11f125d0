"""Command-line entry point.

Exit status: 0 success or verdict true, 1 verdict false, 2 input error
(a JSON object naming the offending field is written to stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import modelfile as mfio
from .gluing import invariant_breakdown, enumerate_splittings
from .novikov import Truncation, nv_expand, parse, render
from .surgery import (flop_transform, transition_transform, verify_flop_qc,
                      verify_transition_qc)

OK, FALSE, INPUT = 0, 1, 2


def _rational_arg(text: str) -> Fraction:
    return mfio.rational(text, "--order")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gwsurgery", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, what):
        sp.add_argument("--model", required=True, help="model file (JSON)")
        sp.add_argument(f"--{what}", default=None, help=f"name of the {what} entry to use")
        sp.add_argument("--order", default="10", help="area bound (rational)")
        sp.add_argument("--out", default=None, help="output path; stdout when omitted")

    for name in ("flop", "transition"):
        common(sub.add_parser(name, help=f"transform a GW table across a {name}"), "surgery")
    for name in ("verify-flop", "verify-transition"):
        sp = sub.add_parser(name, help="check quantum naturality, write a report")
        common(sp, "surgery")
        sp.add_argument("--mode", choices=("check", "generate"), default=None,
                        help="check a supplied target table or generate one")
        sp.add_argument("--w-order", type=int, default=0, help="big-quantum order J")
    common(sub.add_parser("glue", help="evaluate the gluing formula"), "gluing")
    common(sub.add_parser("enumerate", help="list splitting types"), "gluing")
    sp = sub.add_parser("expand", help="print a truncated Novikov series")
    sp.add_argument("--series", required=True)
    sp.add_argument("--order", required=True)
    sp.add_argument("--area", default=None, help="comma-separated area functional (default all ones)")
    sp.add_argument("--out", default=None)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> mfio.ModelFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise mfio.InputError("--model", f"cannot read {path}: {e.strerror}") from None
    return mfio.loads(text)


def _pick(registry: dict, name, kind_ok, flag: str):
    if name is not None:
        if name not in registry:
            raise mfio.InputError(flag, f"unresolved reference {name!r}")
        entry = registry[name]
        if not kind_ok(entry):
            raise mfio.InputError(flag, f"{name!r} is the wrong kind of entry")
        return entry
    cands = [e for e in registry.values() if kind_ok(e)]
    if len(cands) != 1:
        raise mfio.InputError(flag, f"expected exactly one candidate entry, found {len(cands)}")
    return cands[0]


def _order(args) -> Fraction:
    o = _rational_arg(args.order)
    if o <= 0:
        raise mfio.InputError("--order", "area bound must be positive")
    return o


def _transform(args, mf, kind):
    s = _pick(mf.surgeries, args.surgery, lambda e: e.setup.kind == kind, "--surgery")
    table = mf.gw_tables[s.source_table]
    flagged = []
    fn = flop_transform if kind == "flop" else transition_transform
    out = mfio.build_call("--order", fn, table, s.setup, _order(args), flagged)
    payload = mfio.dump_gw_table(f"{s.name}:{s.setup.target_model.name}", out)
    payload["flagged"] = [{"class": list(k[0]), "genus": k[1], "insertions": list(k[2]), "reason": why}
                          for k, why in flagged]
    _emit(mfio.canonical_dumps(payload), args.out)
    return OK


def _verify(args, mf, kind):
    s = _pick(mf.surgeries, args.surgery, lambda e: e.setup.kind == kind, "--surgery")
    mode = args.mode or ("check" if s.target_table else "generate")
    if mode == "check" and s.target_table is None:
        raise mfio.InputError("--mode", f"surgery {s.name!r} has no target_table to check")
    target = mf.gw_tables[s.target_table] if mode == "check" else None
    table = mf.gw_tables[s.source_table]
    if args.w_order < 0:
        raise mfio.InputError("--w-order", "must be non-negative")
    if kind == "flop":
        if args.w_order:
            raise mfio.InputError("--w-order", "flop verification is small quantum only")
        rep = verify_flop_qc(s.setup, table, target, _order(args))
    else:
        rep = verify_transition_qc(s.setup, table, target, _order(args), s.w, args.w_order)
    _emit(mfio.canonical_dumps(rep.to_json()), args.out)
    return OK if rep.verdict else FALSE


def _gluing_inputs(args, mf):
    g = _pick(mf.gluings, args.gluing, lambda e: True, "--gluing")
    return (g, mf.cut_models[g.cut], mf.z_models[g.z],
            mf.log_tables[g.plus_table], mf.log_tables[g.minus_table])


def _glue(args, mf):
    g, cut, z, plus, minus = _gluing_inputs(args, mf)
    absent = set()
    rows = mfio.build_call(f"gluings.{g.name}", invariant_breakdown, cut, g.target, g.genus,
                           len(g.insertions), plus, minus, z, g.insertions, _order(args),
                           g.support_side, absent)
    total = sum((v for _, v in rows), Fraction(0))
    payload = {
        "gluing": g.name,
        "value": str(total),
        "breakdown": [{"type": t.to_json(), "value": str(v)} for t, v in rows],
        "absent_flags": sorted(json.dumps([list(x) if isinstance(x, tuple) else x for x in k])
                               for k in absent),
    }
    status = OK
    if g.absolute is not None:
        payload["absolute"] = str(g.absolute)
        payload["agrees"] = total == g.absolute
        status = OK if total == g.absolute else FALSE
    _emit(mfio.canonical_dumps(payload), args.out)
    return status


def _enumerate(args, mf):
    g, cut, *_ = _gluing_inputs(args, mf)
    types = mfio.build_call(f"gluings.{g.name}", enumerate_splittings, cut, g.target, g.genus,
                            len(g.insertions), _order(args))
    payload = {"gluing": g.name, "count": len(types), "types": [t.to_json() for t in types]}
    _emit(mfio.canonical_dumps(payload), args.out)
    return OK


def _expand(args):
    F = mfio.build_call("--series", parse, args.series)
    if args.area is None:
        area = (1,) * F.rank
    else:
        area = tuple(mfio.rational(x, "--area") for x in args.area.split(","))
    if len(area) != F.rank:
        raise mfio.InputError("--area", f"need {F.rank} entries")
    order = _rational_arg(args.order)
    E = mfio.build_call("--series", nv_expand, F, Truncation(area, order))
    _emit(render(E) + "\n", args.out)
    return OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "expand":
            return _expand(args)
        mf = _load(args.model)
        if args.command in ("flop", "transition"):
            return _transform(args, mf, args.command)
        if args.command.startswith("verify-"):
            return _verify(args, mf, args.command.split("-", 1)[1])
        if args.command == "glue":
            return _glue(args, mf)
        return _enumerate(args, mf)
    except mfio.InputError as e:
        sys.stderr.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
