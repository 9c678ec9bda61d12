"""Command line front end.

Every command prints JSON unless ``--plain`` is given.  Exit codes: 0 on
success, 2 for bad input, 3 when a surgery precondition fails, 1 when an
internal invariant breaks.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from flatlas.diagrams import (
    CylinderDiagram,
    canonical_key,
    check_diagram,
    diagram_stratum,
    enumerate_diagrams,
    parse_diagram,
    read_corpus,
    write_corpus,
)
from flatlas.errors import FlatlasError, InputError, InvariantError, PreconditionError, ZeroClass, BadIndex
from flatlas.origami import (
    Origami,
    StratumSignature,
    check_origami,
    horizontal_cylinders,
    parse_origami,
    serialize_origami,
    sl2z_orbit,
    stratum_of,
    vertical_cylinders,
)
from flatlas.surgery import collapse_similar_pair, collapse_simple_cylinder, insert_simple_cylinder
from flatlas.symmetry import (
    InvolutionReport,
    double_cover,
    is_free_translation_involution,
    minus_id_involutions,
    prym_zero_action,
    quotient_signature,
    translation_group,
    z2_classes,
)
from flatlas.topology import classify_case, core_curve_relations, pinch


def diagram_report(d: CylinderDiagram) -> dict[str, Any]:
    check_diagram(d)
    sig, genus = diagram_stratum(d)
    _, rels = core_curve_relations(d)
    sc = pinch(d)
    return {
        "key": canonical_key(d),
        "stratum": str(sig),
        "genus": genus,
        "k": d.k,
        "case": classify_case(d),
        "relations": rels,
        "components": [[c.genus, c.boundary, list(c.zeros)] for c in sc.components],
        "dual_edges": [list(e) for e in sc.dual_edges],
    }


def involution_json(o: Origami, inv: InvolutionReport) -> dict[str, Any]:
    sig, _ = quotient_signature(o, inv)
    return {
        "sigma": inv.sigma.one_line(),
        "centers": inv.fixed_centers,
        "vedges": inv.fixed_vedge_midpoints,
        "hedges": inv.fixed_hedge_midpoints,
        "vertices": inv.fixed_vertices,
        "F": inv.total_fixed,
        "quotient_genus": inv.quotient_genus,
        "kind": inv.kind,
        "quotient_signature": str(sig),
        "zero_action": prym_zero_action(o, inv) if inv.kind == "prym" else None,
    }


def _origami_arg(args: argparse.Namespace) -> Origami:
    return check_origami(parse_origami(args.origami, one_based=args.one_based))


def _emit(args: argparse.Namespace, payload: Any, plain: str | None = None) -> None:
    if args.plain and plain is not None:
        print(plain)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_enumerate(args: argparse.Namespace) -> int:
    sig = StratumSignature.parse(args.stratum)
    if sig.flavor != "abelian":
        raise InputError("enumeration needs an abelian stratum")
    keys = enumerate_diagrams(sig, args.ncyl, up_to_symmetry=args.up_to_symmetry)
    payload: dict[str, Any] = {
        "stratum": str(sig),
        "ncyl": args.ncyl,
        "up_to_symmetry": args.up_to_symmetry,
        "count": len(keys),
    }
    if args.out:
        write_corpus(args.out, sig, args.ncyl, keys)
        payload["out"] = args.out
    else:
        payload["diagrams"] = keys
    _emit(args, payload, str(len(keys)) if args.out else "\n".join([str(len(keys))] + keys))
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    if args.diagram is not None:
        reports: Any = diagram_report(parse_diagram(args.diagram))
        rows = [reports]
    else:
        rows = [diagram_report(d) for d in read_corpus(args.infile)]
        reports = rows
    plain = "\n".join(f"{r['key']}\t{r['stratum']}\tk={r['k']}\t{r['case']}" for r in rows)
    _emit(args, reports, plain)
    return 0


def cmd_involutions(args: argparse.Namespace) -> int:
    o = _origami_arg(args)
    reps = [involution_json(o, inv) for inv in minus_id_involutions(o)]
    plain = "\n".join(f"F={r['F']}\t{r['kind']}\t{r['quotient_signature']}\tsigma={r['sigma']}" for r in reps)
    _emit(args, reps, plain)
    return 0


def _cover_entry(o: Origami, index: int, cls) -> dict[str, Any]:
    cover = double_cover(o, cls)
    invs = minus_id_involutions(cover)
    sig, genus = stratum_of(cover)
    return {
        "class_index": index,
        "class": str(cls),
        "cover": serialize_origami(cover),
        "stratum": str(sig),
        "genus": genus,
        "involution_F": sorted(inv.total_fixed for inv in invs),
        "kinds": sorted({inv.kind for inv in invs}),
        "free_deck_involution": any(is_free_translation_involution(cover, t) for t in translation_group(cover)),
    }


def cmd_cover(args: argparse.Namespace) -> int:
    o = _origami_arg(args)
    classes = z2_classes(o)
    if args.all:
        entries = [_cover_entry(o, j, c) for j, c in enumerate(classes) if not c.is_zero]
    else:
        if not 0 <= args.cls < len(classes):
            raise BadIndex(f"class index must be in 0..{len(classes) - 1}")
        if classes[args.cls].is_zero:
            raise ZeroClass("class 0 is the trivial class")
        entries = [_cover_entry(o, args.cls, classes[args.cls])]
    plain = "\n".join(f"{e['class_index']}\t{e['cover']}\t{e['stratum']}\tF={e['involution_F']}" for e in entries)
    _emit(args, {"base": serialize_origami(o), "count": len(entries), "covers": entries}, plain)
    return 0


def cmd_collapse(args: argparse.Namespace) -> int:
    d = parse_diagram(args.diagram)
    if args.pair is None:
        after = collapse_simple_cylinder(d, args.cyl)
    else:
        after = collapse_similar_pair(d, args.cyl, args.pair)
    payload = {
        "before": {"diagram": str(d), "key": canonical_key(d), "stratum": str(diagram_stratum(d)[0])},
        "after": {"diagram": str(after), "key": canonical_key(after), "stratum": str(diagram_stratum(after)[0])},
    }
    _emit(args, payload, f"{payload['before']['key']}\t->\t{payload['after']['key']}\t{payload['after']['stratum']}")
    return 0


def cmd_insert(args: argparse.Namespace) -> int:
    d = parse_diagram(args.diagram)
    split = None
    if args.split:
        try:
            m1, m2 = (int(x) for x in args.split.split(","))
        except ValueError as exc:
            raise InputError("split must look like m1,m2") from exc
        split = (m1, m2)
    after = insert_simple_cylinder(d, args.label, split)
    payload = {
        "before": {"diagram": str(d), "key": canonical_key(d), "stratum": str(diagram_stratum(d)[0])},
        "after": {"diagram": str(after), "key": canonical_key(after), "stratum": str(diagram_stratum(after)[0])},
    }
    _emit(args, payload, f"{payload['before']['key']}\t->\t{payload['after']['key']}\t{payload['after']['stratum']}")
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    o = _origami_arg(args)
    orbit = [serialize_origami(x) for x in sl2z_orbit(o)]
    _emit(args, {"size": len(orbit), "origamis": orbit}, "\n".join(orbit))
    return 0


def cmd_info(args: argparse.Namespace) -> int:
    if args.origami is not None:
        o = _origami_arg(args)
        sig, genus = stratum_of(o)

        def cyl_json(cs):
            return [
                {"height": c.height, "circumference": c.circumference, "bottom": len(c.bottom), "top": len(c.top)}
                for c in cs
            ]

        payload = {
            "origami": serialize_origami(o),
            "stratum": str(sig),
            "genus": genus,
            "horizontal_cylinders": cyl_json(horizontal_cylinders(o)),
            "vertical_cylinders": cyl_json(vertical_cylinders(o)),
        }
        plain = f"{payload['stratum']}\tgenus {genus}\t{len(payload['horizontal_cylinders'])} horizontal cylinders"
    elif args.diagram is not None:
        payload = diagram_report(parse_diagram(args.diagram))
        plain = f"{payload['stratum']}\tgenus {payload['genus']}\t{payload['case']}"
    else:
        raise InputError("info needs --origami or --diagram")
    _emit(args, payload, plain)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flatlas", description=__doc__.splitlines()[0])
    parser.add_argument("--plain", action="store_true", help="print tables instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def origami_opt(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--origami", required=required, help="e.g. 'origami n=3 r=(0,1) u=(0,2)'")
        p.add_argument("--one-based", action="store_true", help="cycles in the origami text are 1-based")

    p = sub.add_parser("enumerate", help="all cylinder diagrams of a stratum")
    p.add_argument("--stratum", required=True, help="comma-separated zero orders, e.g. 2,1,1")
    p.add_argument("--ncyl", type=int, required=True)
    p.add_argument("--up-to-symmetry", action="store_true", help="also identify mirror images and half turns")
    p.add_argument("--out", help="corpus file to write")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="degeneration case and homology of diagrams")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--diagram")
    g.add_argument("--in", dest="infile")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("involutions", help="involutions acting as -id")
    origami_opt(p)
    p.set_defaults(func=cmd_involutions)

    p = sub.add_parser("cover", help="unramified double covers")
    origami_opt(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--class", dest="cls", type=int, help="index into the sorted class list (0 is trivial)")
    g.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("collapse", help="collapse a simple cylinder")
    p.add_argument("--diagram", required=True)
    p.add_argument("--cyl", type=int, required=True)
    p.add_argument("--pair", type=int, help="second simple cylinder to collapse")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("insert", help="insert a simple cylinder along a saddle connection")
    p.add_argument("--diagram", required=True)
    p.add_argument("--label", type=int, required=True)
    p.add_argument("--split", help="expected orders of the two new zeros, e.g. 1,1")
    p.set_defaults(func=cmd_insert)

    p = sub.add_parser("orbit", help="SL(2,Z) orbit of an origami")
    origami_opt(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("info", help="stratum and cylinders of an origami or diagram")
    origami_opt(p, required=False)
    p.add_argument("--diagram")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, FlatlasError) as exc:
        print(f"invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
