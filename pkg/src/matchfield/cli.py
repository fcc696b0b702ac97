"""Command-line interface.

Every subcommand maps to one library operation or a short pipeline; input
and output are canonical JSON (sorted keys, integers only, newline
terminated), so runs are byte-stable.  Exit codes: 0 success, 1 validation
failure (the report goes to stderr as JSON), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import chow, core, fields, flip, stacks, triang
from .errors import MatchfieldError


def _load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(data, path=None) -> None:
    text = core.canonical_json(data)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(report) -> int:
    sys.stderr.write(core.canonical_json(report))
    return 1


def _write_dot(text: str, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _parse_vector(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _with_seed(data: dict, args) -> dict:
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    return data


def _cycle_json(cycle):
    return [list(e) for e in cycle] if cycle else None


# -- subcommand handlers ----------------------------------------------------


def cmd_check_linkage(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    report = fields.is_linkage(field)
    out = _with_seed(
        {
            "linkage": report.ok,
            "failures": [
                {"tau": list(res.tau), "cycle": _cycle_json(res.cycle)}
                for res in report.failures
            ],
        },
        args,
    )
    if report.ok:
        _emit(out, args.json)
        return 0
    _emit(out, args.json)
    return _fail(out)


def cmd_amalgamate(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    target = _parse_vector(args.target)
    tf = fields.tope_field_of_type(field, target)
    _emit(_with_seed(fields.field_to_json_dict(tf), args), args.json)
    return 0


def cmd_arrangement(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    ta = fields.tope_arrangement(field)
    _emit(_with_seed(fields.arrangement_to_json_dict(ta), args), args.json)
    return 0


def cmd_trianguloid_check(args) -> int:
    eta = fields.extended_from_json_dict(_load(args.input))
    report = fields.trianguloid_check(eta)
    out = _with_seed(report.as_dict(), args)
    _emit(out, args.json)
    return 0 if report.trianguloid else _fail(out)


def cmd_chow(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    cc = chow.chow_collection(field)
    _emit(_with_seed(chow.collection_to_json_dict(cc), args), args.json)
    return 0


def cmd_phi(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    cc = chow.chow_collection(field)
    _emit(_with_seed(chow.phi_to_json_dict(cc.phi()), args), args.json)
    return 0


def cmd_reconstruct_chow(args) -> int:
    phi = chow.phi_from_json_dict(_load(args.phi))
    cc = chow.reconstruct_chow_from_phi(phi, phi.n, phi.d)
    _emit(_with_seed(chow.collection_to_json_dict(cc), args), args.json)
    return 0


def cmd_validate_triangulation(args) -> int:
    data = _load(args.input)
    n, d = data["n"], data["d"]
    trees = [core.BipartiteGraph(n, d, [tuple(e) for e in t]) for t in data["trees"]]
    report = triang.check_triangulation(trees, n, d)
    out = _with_seed(
        {"valid": report.ok, "violation": report.kind, "witness": repr(report.witness)},
        args,
    )
    _emit(out, args.json)
    return 0 if report.ok else _fail(out)


def cmd_extract(args) -> int:
    t = triang.triangulation_from_json_dict(_load(args.input))
    field = triang.extract_field(t)
    _emit(_with_seed(fields.field_to_json_dict(field), args), args.json)
    return 0


def cmd_phi_triangulation(args) -> int:
    t = triang.triangulation_from_json_dict(_load(args.input))
    pairs = triang.phi(t)
    _emit(_with_seed(triang.pairs_to_json_dict(pairs, t.n, t.d), args), args.json)
    return 0


def cmd_reconstruct_triangulation(args) -> int:
    data = _load(args.input)
    pairs = triang.pairs_from_json_dict(data)
    t = triang.reconstruct_triangulation(pairs, data["n"], data["d"])
    _emit(_with_seed(triang.triangulation_to_json_dict(t), args), args.json)
    return 0


def cmd_staircase(args) -> int:
    left = _parse_vector(args.left_order) if args.left_order else None
    right = _parse_vector(args.right_order) if args.right_order else None
    t = triang.staircase_triangulation(args.n, args.d, left, right)
    _emit(_with_seed(triang.triangulation_to_json_dict(t), args), args.json)
    return 0


def cmd_enumerate_triangulations(args) -> int:
    found = triang.enumerate_triangulations(args.n, args.d)
    out = _with_seed(
        {
            "n": args.n,
            "d": args.d,
            "count": len(found),
            "bound": triang.count_bound(args.n, args.d),
            "triangulations": [
                triang.triangulation_to_json_dict(t)["trees"] for t in found
            ],
        },
        args,
    )
    _emit(out, args.json)
    return 0


def cmd_flipgraph(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    fg = flip.flip_graph(field)
    if args.dot:
        colored = fields.is_linkage(field).ok  # tree coloring needs linkage
        _write_dot(flip.flip_graph_to_dot(field, color=colored), args.dot)
    out = _with_seed(
        {
            "vertices": [list(s) for s in fg.vertices],
            "edges": sorted(
                [list(a), list(b), label] for a, b, label in fg.edges
            ),
            "edge_count": len(fg.edges),
            "expected_for_linkage": flip.expected_edge_count(field.n, field.d),
        },
        args,
    )
    _emit(out, args.json)
    return 0


def cmd_cells(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    cells = flip.maximal_cells(field)
    out = _with_seed(
        {
            "cells": {
                core.subset_key(point): {
                    "factors": [list(ns) for ns in cell.neighbor_sets],
                    "vertices": sorted(list(s) for s in cell.vertices),
                }
                for point, cell in sorted(cells.items())
            }
        },
        args,
    )
    _emit(out, args.json)
    return 0


def cmd_complete(args) -> int:
    stack = stacks.stack_from_json_dict(_load(args.input))
    field = stacks.completion(stack)
    _emit(_with_seed(fields.field_to_json_dict(field), args), args.json)
    return 0


def cmd_ensemble_check(args) -> int:
    stack = stacks.stack_from_json_dict(_load(args.input))
    report = stacks.validate_ensemble(stack)
    out = _with_seed(report.as_dict(), args)
    _emit(out, args.json)
    return 0 if report.ok else _fail(out)


def cmd_stiefel(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    matroids = stacks.stiefel_image_of_field(field)
    _emit(_with_seed({"matroids": [m.as_dict() for m in matroids]}, args), args.json)
    return 0


def cmd_right_submatching_check(args) -> int:
    field = fields.field_from_json_dict(_load(args.input))
    report = stacks.right_submatching_check(field, max_left=args.cap)
    out = _with_seed(
        {"ok": report.ok, "witness": repr(report.witness) if report.witness else None},
        args,
    )
    _emit(out, args.json)
    return 0 if report.ok else _fail(out)


def cmd_roundtrip(args) -> int:
    data = _load(args.input)
    if args.kind == "chow":
        field = fields.field_from_json_dict(data)
        cc = chow.chow_collection(field)
        rebuilt = chow.reconstruct_chow_from_phi(cc.phi(), field.n, field.d)
        diff = sorted(
            core.subset_key(rho)
            for rho in set(cc.covectors) | set(rebuilt.covectors)
            if cc.covectors.get(rho) != rebuilt.covectors.get(rho)
        )
    else:
        t = triang.triangulation_from_json_dict(data)
        rebuilt = triang.reconstruct_triangulation(triang.phi(t), t.n, t.d)
        diff = sorted(
            str([list(e) for e in g.edges])
            for g in t.trees.symmetric_difference(rebuilt.trees)
        )
    out = _with_seed({"kind": args.kind, "diff": diff, "match": not diff}, args)
    _emit(out, args.json)
    return 0 if not diff else _fail(out)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchfield",
        description="Exact combinatorics of matching fields, tope arrangements, "
        "Chow covectors and triangulations of products of two simplices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--json", help="write the JSON result to this path")
        p.add_argument("--seed", type=int, help="seed recorded in the output")
        return p

    p = add("check-linkage", cmd_check_linkage, help="test the linkage property")
    p.add_argument("input", help="matching/tope field JSON")

    p = add("amalgamate", cmd_amalgamate, help="iterated amalgamation to a type")
    p.add_argument("input")
    p.add_argument(
        "--target", "--type", dest="target", required=True,
        help="target type vector, e.g. 3,1",
    )

    p = add("arrangement", cmd_arrangement, help="tope arrangement of a field")
    p.add_argument("input")

    p = add("trianguloid-check", cmd_trianguloid_check, help="axioms T1-T4")
    p.add_argument("input", help="extended arrangement JSON")

    p = add("chow", cmd_chow, help="all Chow covectors")
    p.add_argument("input")

    p = add("phi", cmd_phi, help="subset -> lattice point bijection")
    p.add_argument("input")

    p = add("reconstruct-chow", cmd_reconstruct_chow, help="invert a phi map")
    p.add_argument("--phi", required=True, help="phi JSON file")

    p = add("validate-triangulation", cmd_validate_triangulation, help="tree axioms")
    p.add_argument("input")

    p = add("extract", cmd_extract, help="matching field of a triangulation")
    p.add_argument("input")

    p = add("phi-triangulation", cmd_phi_triangulation, help="degree pair set")
    p.add_argument("input")

    p = add(
        "reconstruct-triangulation",
        cmd_reconstruct_triangulation,
        help="invert a degree pair set",
    )
    p.add_argument("input", help="pairs JSON with n, d")

    p = add("staircase", cmd_staircase, help="staircase triangulation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--left-order", help="permutation of 1..n, e.g. 2,1,3")
    p.add_argument("--right-order", help="permutation of 1..d")

    p = add(
        "enumerate-triangulations",
        cmd_enumerate_triangulations,
        help="exhaustive enumeration (tiny sizes)",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = add("flipgraph", cmd_flipgraph, help="flip graph, optionally as DOT")
    p.add_argument("input")
    p.add_argument("--dot", help="write DOT with per-linkage-tree colors")

    p = add("cells", cmd_cells, help="maximal prodsimplicial cells")
    p.add_argument("input")

    p = add("complete", cmd_complete, help="matching field completion of a stack")
    p.add_argument("input")

    p = add("ensemble-check", cmd_ensemble_check, help="stack ensemble axioms")
    p.add_argument("input")

    p = add("stiefel", cmd_stiefel, help="transversal matroids of the maximal covectors")
    p.add_argument("input")

    p = add(
        "right-submatching-check",
        cmd_right_submatching_check,
        help="compatible right submatching property",
    )
    p.add_argument("input")
    p.add_argument("--cap", type=int, help="cap on |J|")

    p = add("roundtrip", cmd_roundtrip, help="forward map, reconstruct, diff")
    p.add_argument("--kind", choices=["chow", "triangulation"], required=True)
    p.add_argument("input")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except MatchfieldError as exc:
        sys.stderr.write(core.canonical_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(core.canonical_json({"error": type(exc).__name__, "message": str(exc)}))
        return 2


def main() -> None:
    sys.exit(run())
