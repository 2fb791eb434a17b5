"""Command-line interface.

Exit codes: 0 success or check passed, 1 a theorem check failed, 2 bad input.
Structured output is JSON with a fixed field order, meant for golden files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .digraph import (
    HomologyDigraph,
    Report,
    VerificationError,
    digraph_from_basis,
    oracle_compare,
    relative_kunneth,
    verify_connecting,
    verify_coproduct,
    verify_excision,
    verify_kunneth,
    verify_map,
)
from .document import DocumentError, SpaceDocument, from_space, load, serialize
from .homology import HomologyBasis, homology
from .linalg import Field, parse_field
from .models import MODELS, get_model
from .spaces import InputError, PointMap, coproduct, product, wedge

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _scalar(c):
    return str(c) if isinstance(c, Fraction) else int(c)


def _dims(d: dict) -> dict[str, int]:
    return {str(k): v for k, v in sorted(d.items())}


# ---------------------------------------------------------------- report trees


def homology_tree(hb: HomologyBasis) -> dict:
    basis = []
    for k in hb.gvs.degrees():
        for i, label in enumerate(hb.gvs.labels[k]):
            cycle = [{"coefficient": _scalar(c), "simplex": list(s)} for c, s in hb.rep_terms(k, i)]
            basis.append({"label": label, "degree": k, "cycle": cycle})
    return {"betti": _dims(hb.betti()), "basis": basis}


def digraph_tree(d: HomologyDigraph, witnesses: bool = False, table: bool = False) -> dict:
    x = d.space
    rel = d.relation
    tensor_labels = rel.indexer.space().labels
    defining = {}
    for n, s in rel.defining.parts.items():
        defining[str(n)] = [
            {label: _scalar(c) for label, c in zip(tensor_labels[n], v) if c != 0} for v in s.vectors()
        ]
    tree = homology_tree(d.basis)
    tree["concepts"] = len(d.concepts)
    tree["defining_dims"] = _dims(rel.dims())
    tree["defining_basis"] = defining
    tree["pointing"] = [{"source": a, "target": b, "points": p} for a, b, p in d.pointing_matrix()]
    if witnesses:
        tree["witnesses"] = [
            {
                "extent": x.ordered(w.pair.extent),
                "intent": x.ordered(w.pair.intent),
                "extent_image_dims": _dims(w.image_e.dims()),
                "intent_image_dims": _dims(w.image_f.dims()),
            }
            for w in d.witnesses
        ]
        tree["justification"] = [
            {
                "source": a,
                "target": b,
                "extent": None if c is None else x.ordered(c.extent),
                "intent": None if c is None else x.ordered(c.intent),
            }
            for (a, b), c in d.justification().items()
        ]
    if table:
        classes = d.nonzero_classes()
        tree["class_table"] = [
            {"source": d.label(v), "targets": [d.label(w) for w in classes if d.points_to(v, w)]}
            for v in classes
        ]
    return tree


def report_tree(r: Report) -> dict:
    return {"check": r.check, "passed": r.passed, "details": r.details}


# ---------------------------------------------------------------- table rendering


def render_table(tree: dict) -> str:
    lines = []
    for key, value in tree.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            for item in value:
                lines.append("  " + "  ".join(f"{k}={_flat(v)}" for k, v in item.items()))
        elif isinstance(value, dict) and value and all(isinstance(v, list) for v in value.values()):
            lines.append(f"{key}:")
            for k, v in value.items():
                lines.append(f"  {k}: {_flat(v)}")
        else:
            lines.append(f"{key}: {_flat(value)}")
    return "\n".join(lines) + "\n"


def _flat(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_flat(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# ---------------------------------------------------------------- commands


def _field(args) -> Field:
    try:
        return parse_field(args.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _digraph(doc: SpaceDocument, args, pair: bool) -> HomologyDigraph:
    x = doc.to_space()
    mask = x.mask(doc.subset or ()) if pair else 0
    hb = homology(x, _field(args), mask, max_degree=args.max_degree)
    return digraph_from_basis(hb, threads=args.threads, seed=args.seed)


def cmd_validate(args) -> tuple[dict, int]:
    doc = load(args.doc)
    x = doc.to_space()
    tree = {
        "name": doc.name,
        "points": len(x),
        "direction_mode": x.dir_mode(),
        "pospace": x.is_pospace(),
        "topology_pairs": len(x.topo_pairs()),
        "direction_pairs": len(x.dir_pairs()),
    }
    if doc.subset is not None:
        tree["subset"] = x.ordered(x.mask(doc.subset))
        tree["subset_open"] = x.is_open(x.mask(doc.subset))
    return tree, EXIT_OK


def cmd_homology(args):
    doc = load(args.doc)
    x = doc.to_space()
    hb = homology(x, _field(args), x.mask(doc.subset or ()), max_degree=args.max_degree)
    tree = {"name": doc.name, "field": hb.field.name}
    tree.update(homology_tree(hb))
    return tree, EXIT_OK


def _digraph_cmd(args, pair: bool):
    doc = load(args.doc)
    if pair and doc.subset is None:
        raise InputError("digraph-pair needs a document with a 'subset'")
    d = _digraph(doc, args, pair)
    tree = {"name": doc.name, "field": d.field.name}
    if pair:
        tree["subset"] = list(doc.subset)
    tree.update(digraph_tree(d, args.witnesses, args.table))
    return tree, EXIT_OK


def cmd_digraph(args):
    return _digraph_cmd(args, False)


def cmd_digraph_pair(args):
    return _digraph_cmd(args, True)


def _emit_doc(doc: SpaceDocument, args) -> tuple[dict, int]:
    if args.out:
        Path(args.out).write_text(serialize(doc), encoding="utf-8")
    return doc.to_tree(), EXIT_OK


def cmd_product(args):
    a, b = load(args.left), load(args.right)
    x = product(a.to_space(), b.to_space())
    return _emit_doc(from_space(f"{a.name}×{b.name}", x), args)


def cmd_coproduct(args):
    docs = [load(p) for p in args.docs]
    spaces = [d.to_space() for d in docs]
    if args.check:
        r = verify_coproduct(spaces, _field(args), threads=args.threads)
        return report_tree(r), EXIT_OK if r.passed else EXIT_FAIL
    x, _ = coproduct(spaces)
    return _emit_doc(from_space("⊔".join(d.name for d in docs), x), args)


def cmd_wedge(args):
    a, b = load(args.left), load(args.right)
    x, _ = wedge(a.to_space(), args.left_base, b.to_space(), args.right_base)
    return _emit_doc(from_space(f"{a.name}∨{b.name}", x), args)


def _check(r: Report):
    return report_tree(r), EXIT_OK if r.passed else EXIT_FAIL


def cmd_kunneth(args):
    a, b = load(args.left), load(args.right)
    return _check(verify_kunneth(a.to_space(), b.to_space(), _field(args), threads=args.threads))


def cmd_relative_kunneth(args):
    a, b = load(args.left), load(args.right)
    return _check(relative_kunneth(a.to_pair(), b.to_pair(), _field(args), threads=args.threads))


def cmd_excision(args):
    doc = load(args.doc)
    if doc.subset is None:
        raise InputError("excision-check needs a document with a 'subset'")
    u = [p for p in args.excise.split(",") if p] if args.excise else []
    return _check(verify_excision(doc.to_pair(), u, _field(args), threads=args.threads))


def cmd_connecting(args):
    doc = load(args.doc)
    if doc.subset is None:
        raise InputError("connecting-check needs a document with a 'subset'")
    return _check(verify_connecting(doc.to_pair(), _field(args), threads=args.threads))


def cmd_map_check(args):
    a, b = load(args.source), load(args.target)
    try:
        mapping = json.loads(Path(args.map).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{args.map}: cannot read: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno, args.map) from None
    if not isinstance(mapping, dict):
        raise InputError(f"{args.map}: the map must be an object from source ids to target ids")
    x, y = a.to_space(), b.to_space()
    f = PointMap.from_dict(x, y, mapping)
    r = verify_map(f, _field(args), x.mask(a.subset or ()), y.mask(b.subset or ()), threads=args.threads)
    return _check(r)


def cmd_oracle(args):
    doc = load(args.doc)
    x = doc.to_space()
    r = oracle_compare(x, _field(args), cap=args.oracle_cap, subset_mask=x.mask(doc.subset or ()))
    tree = report_tree(r)
    tree["result"] = "identical" if r.passed else "different"
    return tree, EXIT_OK if r.passed else EXIT_FAIL


def cmd_fixtures(args):
    names = args.names or list(MODELS)
    out = []
    status = EXIT_OK
    for name in names:
        m = get_model(name)
        entry: dict = {"name": m.name, "points": len(m.space)}
        if args.write:
            target = Path(args.write)
            target.mkdir(parents=True, exist_ok=True)
            doc = from_space(m.name, m.space, m.subset)
            (target / f"{m.name}.doc").write_text(serialize(doc), encoding="utf-8")
        if args.check:
            results = m.check(m.digraph(_field(args), threads=args.threads))
            entry["facts"] = [{"fact": desc, "holds": ok} for desc, ok in results]
            if not all(ok for _, ok in results):
                status = EXIT_FAIL
        out.append(entry)
    return {"fixtures": out}, status


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="gf2", help="gf2, gf:<p> or rational (default gf2)")
    common.add_argument("--output", choices=("table", "structured"), default="table")
    common.add_argument("--witnesses", action="store_true", help="include concept pairs and justifications")
    common.add_argument("--table", action="store_true", help="include the pointing table of all nonzero classes")
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--oracle-cap", type=int, default=10)
    common.add_argument("--seed", type=int, default=None, help="shuffle accumulation order (output is unchanged)")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="homdigraph", description="Homology digraphs of finite preordered spaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a space document").add_argument("doc")
    add("homology", cmd_homology, "homology with representative cycles").add_argument("doc")
    add("digraph", cmd_digraph, "homology digraph of a space").add_argument("doc")
    add("digraph-pair", cmd_digraph_pair, "homology digraph of a pair").add_argument("doc")
    for name, func in (("product", cmd_product), ("kunneth-check", cmd_kunneth),
                       ("relative-kunneth-check", cmd_relative_kunneth)):
        sp = add(name, func, f"{name} of two documents")
        sp.add_argument("left")
        sp.add_argument("right")
        if name == "product":
            sp.add_argument("--out")
    sp = add("coproduct", cmd_coproduct, "disjoint union of documents")
    sp.add_argument("docs", nargs="+")
    sp.add_argument("--out")
    sp.add_argument("--check", action="store_true", help="verify the coproduct theorem instead")
    sp = add("wedge", cmd_wedge, "glue two documents at basepoints")
    sp.add_argument("left")
    sp.add_argument("left_base")
    sp.add_argument("right")
    sp.add_argument("right_base")
    sp.add_argument("--out")
    sp = add("excision-check", cmd_excision, "verify excision for a pair document")
    sp.add_argument("doc")
    sp.add_argument("--excise", default="", help="comma-separated point ids")
    add("connecting-check", cmd_connecting, "verify the connecting map is a morphism").add_argument("doc")
    sp = add("map-check", cmd_map_check, "verify an induced map is a morphism")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("map", help="JSON object from source ids to target ids")
    add("oracle-compare", cmd_oracle, "compare with the all-subsets oracle").add_argument("doc")
    sp = add("fixtures", cmd_fixtures, "list, export or check the built-in models")
    sp.add_argument("names", nargs="*")
    sp.add_argument("--write", metavar="DIR")
    sp.add_argument("--check", action="store_true")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.threads < 1:
        err.write("error: --threads must be at least 1\n")
        return EXIT_INPUT
    try:
        tree, code = args.func(args)
    except VerificationError as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_FAIL
    except (InputError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    if args.output == "structured":
        out.write(json.dumps(tree, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(render_table(tree))
    return code


def main() -> None:
    sys.exit(run())
