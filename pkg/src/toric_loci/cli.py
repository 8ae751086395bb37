"""Command line interface: ``toric-loci analyze ...`` and ``toric-loci crosscheck ...``.

Every command prints one report, as sorted-key JSON (default) or as a plain
text rendering of the same data.  Exit codes: 0 ok, 2 input error,
3 resource cap exceeded, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cone import Cone
from .errors import InputError, InvariantError, ResourceError, ToricLociError
from .gorenstein import in_radical, non_gorenstein_locus, trace_generators_bounded
from .hibi import (
    DEFAULT_CAP,
    DEFAULT_TUPLE_CAP,
    build_cone,
    formula_locus_report,
    mp_locus_dimension,
    order_polytope_edges,
    order_polytope_vertices,
    radical_member_mp,
)
from .lattice import is_primitive
from .posets import Poset
from .segre import DEFAULT_SUM_CAP, SegreParams, analyze_secant

EXIT_OK = 0


# -- input ----------------------------------------------------------------

def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def _int_vectors(data, key: str) -> list[tuple[int, ...]]:
    if not isinstance(data, list) or not data:
        raise InputError(f"{key!r} must be a nonempty list of integer vectors")
    out = []
    for v in data:
        if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
            raise InputError(f"{key!r}: {v!r} is not a list of integers")
        t = tuple(v)
        if not any(t):
            raise InputError(f"{key!r}: zero vector {list(t)}")
        if not is_primitive(t):
            raise InputError(f"{key!r}: {list(t)} is not primitive")
        out.append(t)
    if len({len(v) for v in out}) != 1:
        raise InputError(f"{key!r}: vectors have different lengths")
    return out


def parse_cone(data) -> Cone:
    """``sigma_dual`` from ``{"rays": ...}`` and/or ``{"inequalities": ...}``.

    ``rays`` generate ``sigma_dual``; ``inequalities`` are its facet normals,
    i.e. the ray generators of ``sigma``.  If both are present they must
    describe the same cone.
    """
    if not isinstance(data, dict):
        raise InputError("cone input must be a JSON object")
    unknown = set(data) - {"rays", "inequalities", "ambient_rank"}
    if unknown:
        raise InputError(f"unknown cone keys: {sorted(unknown)}")
    if "rays" not in data and "inequalities" not in data:
        raise InputError('cone input needs "rays" or "inequalities"')
    rays = _int_vectors(data["rays"], "rays") if "rays" in data else None
    ineqs = _int_vectors(data["inequalities"], "inequalities") if "inequalities" in data else None
    dims = {len(v[0]) for v in (rays, ineqs) if v}
    if "ambient_rank" in data:
        dims.add(data["ambient_rank"])
    if len(dims) != 1:
        raise InputError("rays, inequalities and ambient_rank disagree on the ambient rank")
    d = dims.pop()
    a = Cone.from_generators(rays, d) if rays else None
    b = Cone.from_inequalities(ineqs, d) if ineqs else None
    if a is not None and b is not None and a != b:
        raise InputError("rays and inequalities describe different cones")
    cone = a or b
    assert cone is not None
    if not cone.is_full_dimensional:
        raise InputError("degenerate cone: sigma_dual is not full-dimensional (sigma has a lineality space)")
    if not cone.is_pointed:
        raise InputError("degenerate cone: sigma_dual contains a line (sigma is not full-dimensional)")
    return cone


def parse_poset(data) -> Poset:
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError('poset input must be an object with "elements" and "relations"')
    unknown = set(data) - {"elements", "relations"}
    if unknown:
        raise InputError(f"unknown poset keys: {sorted(unknown)}")
    elements = data["elements"]
    relations = data.get("relations", [])
    if not isinstance(elements, list) or not all(isinstance(e, (str, int)) and not isinstance(e, bool) for e in elements):
        raise InputError('"elements" must be a list of strings or integers')
    if not isinstance(relations, list) or not all(
        isinstance(r, list) and len(r) == 2 and all(isinstance(x, (str, int)) and not isinstance(x, bool) for x in r)
        for r in relations
    ):
        raise InputError('"relations" must be a list of [a, b] pairs of element labels')
    return Poset(elements, [tuple(r) for r in relations])


def _check_cap(P: Poset, cap: int) -> None:
    if len(P) + 2 > cap:
        raise ResourceError(f"extended poset has {len(P) + 2} elements, enumeration cap is {cap}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# -- reports --------------------------------------------------------------

def _label(x):
    return x if isinstance(x, int) else str(x)


def _fibres(P: Poset, q) -> list[list]:
    order = P.bar.index
    blocks = [sorted(b, key=order.__getitem__) for b in q.blocks]
    return [[_label(x) for x in b] for b in sorted(blocks, key=lambda b: order[b[0]])]


def cone_report(cone: Cone, trace_bound: int | None = None) -> dict:
    report = non_gorenstein_locus(cone)
    out = report.to_json()
    out["cone"] = cone.to_json()
    if trace_bound is not None:
        gens = trace_generators_bounded(cone, trace_bound)
        out["trace_bound"] = trace_bound
        out["trace_generators"] = [list(m.exponent) for m in gens]
    return out


def poset_report(P: Poset, cap: int = DEFAULT_CAP) -> dict:
    _check_cap(P, cap)
    report = formula_locus_report(P, cap)
    out = report.to_json()
    out["cone"] = build_cone(P).to_json()
    out["elements"] = [_label(e) for e in P.bar.elements]
    out["edges"] = [
        {"active_normals": list(f.active_normals), "fibres": _fibres(P, q)} for f, q in order_polytope_edges(P)
    ]
    return out


def crosscheck_report(P: Poset, cap: int = DEFAULT_CAP, tuple_cap: int = DEFAULT_TUPLE_CAP) -> dict:
    _check_cap(P, cap)
    formula = formula_locus_report(P, cap)
    cone = build_cone(P)
    pipeline = non_gorenstein_locus(cone)
    out = {
        "formula_dimension": formula.locus_dimension,
        "cone_dimension": pipeline.locus_dimension,
        "formula_faces": [list(f.active_normals) for f in formula.maximal_contributing_faces],
        "cone_faces": [list(f.active_normals) for f in pipeline.maximal_contributing_faces],
    }
    agree = out["formula_dimension"] == out["cone_dimension"] and out["formula_faces"] == out["cone_faces"]
    if len(P) + 2 <= tuple_cap:
        disagreements = [
            list(v) for v in order_polytope_vertices(P) if radical_member_mp(P, v, tuple_cap) != in_radical(cone, v, pipeline)
        ]
        out["tuple_dimension"] = mp_locus_dimension(P, tuple_cap)
        out["radical_disagreements"] = disagreements
        agree = agree and not disagreements and out["tuple_dimension"] == out["cone_dimension"]
    else:
        out["tuple_dimension"] = None
        out["radical_disagreements"] = None
        out["tuple_check_skipped"] = f"extended poset larger than tuple cap {tuple_cap}"
    out["agree"] = agree
    out["verdict"] = "agree" if agree else "disagree"
    return out


def segre_report(k: str, cap: int = DEFAULT_SUM_CAP) -> dict:
    return analyze_secant(SegreParams.parse(k), cap).to_json()


# -- output ---------------------------------------------------------------

def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_text(doc: dict) -> str:
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            lines.append(f"{key}: ({len(val)})")
            for item in val:
                lines.append("  " + (json.dumps(item, sort_keys=True) if not isinstance(item, dict) else
                                     ", ".join(f"{k}={json.dumps(item[k])}" for k in sorted(item))))
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {json.dumps(val[k])}" for k in sorted(val))
        else:
            lines.append(f"{key}: {json.dumps(val)}")
    return "\n".join(lines) + "\n"


# -- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default json)")
    parser = argparse.ArgumentParser(prog="toric-loci", parents=[common],
                                     description="Non-Gorenstein loci of toric, Hibi and Segre-secant varieties.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top = parser.add_subparsers(dest="command", required=True)

    analyze = top.add_parser("analyze", parents=[common], help="compute a locus report")
    kinds = analyze.add_subparsers(dest="kind", required=True)
    c = kinds.add_parser("cone", parents=[common], help="cone from a JSON file")
    c.add_argument("file")
    c.add_argument("--trace-bound", type=_positive_int, default=None,
                   help="also list trace-ideal generators up to this height")
    p = kinds.add_parser("poset", parents=[common], help="Hibi ring of a poset from a JSON file")
    p.add_argument("file")
    p.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP, help="cap on the size of the extended poset")
    s = kinds.add_parser("segre", parents=[common], help="affine patch of a secant of a Segre variety")
    s.add_argument("--k", required=True, help="comma-separated dimensions k1,...,kn")
    s.add_argument("--cap", type=_positive_int, default=DEFAULT_SUM_CAP, help="cap on k1+...+kn")

    cross = top.add_parser("crosscheck", parents=[common], help="compare independent computations")
    ck = cross.add_subparsers(dest="kind", required=True)
    cp = ck.add_parser("poset", parents=[common], help="formula vs cone pipeline vs zig-zag tuples")
    cp.add_argument("file")
    cp.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    cp.add_argument("--tuple-cap", type=_positive_int, default=DEFAULT_TUPLE_CAP,
                    help="skip the tuple check above this extended poset size")
    return parser


def run(args: argparse.Namespace) -> dict:
    if args.command == "analyze" and args.kind == "cone":
        return cone_report(parse_cone(_load_json(args.file)), args.trace_bound)
    if args.command == "analyze" and args.kind == "poset":
        return poset_report(parse_poset(_load_json(args.file)), args.cap)
    if args.command == "analyze" and args.kind == "segre":
        return segre_report(args.k, args.cap)
    if args.command == "crosscheck" and args.kind == "poset":
        return crosscheck_report(parse_poset(_load_json(args.file)), args.cap, args.tuple_cap)
    raise InvariantError(f"unhandled command {args.command} {args.kind}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "json")
    try:
        doc = run(args)
    except ToricLociError as exc:
        if isinstance(exc, InputError):
            kind = "input error"
        elif isinstance(exc, ResourceError):
            kind = "resource cap"
        else:
            kind = "internal error"
        print(f"toric-loci: {kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(render_json(doc) if fmt == "json" else render_text(doc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
