"""Command-line surface: construct, certify, bounds, demo.

Exit codes: 0 success (for certify/demo: every check passed), 1 a
certification check failed, 2 usage/input error, 3 construction failure.
Reports are valid JSON on every path, embed the tool version and the
run configuration, and are byte-identical across reruns with the same
inputs regardless of --jobs.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import bounds_table, edge_bounds
from .certify import brute_force_face_lattice, certify_theorem, theorem_report_json
from .construction import ConstructionError, ConstructionParams, construct
from .fileio import (
    FormatError,
    dumps_json,
    format_certificates,
    load_point_set,
    save_point_set,
    trace_json,
    write_json,
)
from .geometry import GeometryError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csneighborly",
        description="Construct and certify centrally symmetric 2-neighborly polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="build an almost acute cs set")
    p_construct.add_argument("--dim", type=int, required=True)
    p_construct.add_argument("--seed", type=int, default=0)
    p_construct.add_argument("--c", type=str, default=None, help="apex height, rational 'p/q'")
    p_construct.add_argument("--out", type=str, required=True, help="point-set output path")
    p_construct.add_argument("--trace", type=str, default=None,
                             help="trace JSON path (default: OUT.trace.json)")

    p_certify = sub.add_parser("certify", help="certify a point-set file")
    p_certify.add_argument("input", type=str)
    p_certify.add_argument("--report", type=str, default=None,
                           help="report JSON path (default: stdout)")
    p_certify.add_argument("--brute-force", action="store_true",
                           help="also run the facet-enumeration oracle and require agreement")
    p_certify.add_argument("--max-violations", type=int, default=32)
    p_certify.add_argument("--jobs", type=int, default=1)
    p_certify.add_argument("--certificates", type=str, default=None,
                           help="optional sidecar path for the face certificates")

    p_bounds = sub.add_parser("bounds", help="print the quantitative bounds table")
    p_bounds.add_argument("--dim", type=int, required=True)
    p_bounds.add_argument("--n", type=int, default=None)

    p_demo = sub.add_parser("demo", help="construct then certify in one run")
    p_demo.add_argument("--dim", type=int, required=True)
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--c", type=str, default=None)
    p_demo.add_argument("--jobs", type=int, default=1)
    p_demo.add_argument("--out", type=str, default=None)
    p_demo.add_argument("--report", type=str, default=None)
    return parser


def _parse_apex(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational for --c: {text!r} ({exc})") from None


def _make_params(args) -> ConstructionParams:
    return ConstructionParams(
        dim=args.dim,
        apex_height=_parse_apex(args.c),
        seed=args.seed,
    )


def _emit(doc: dict, path: Optional[str]) -> None:
    text = dumps_json(doc)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="ascii")


def cmd_construct(args) -> int:
    try:
        params = _make_params(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        point_set, trace = construct(params)
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    trace_path = args.trace if args.trace else args.out + ".trace.json"
    try:
        save_point_set(point_set, args.out)
        write_json(trace_json(params, trace), trace_path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _certify_config(args, command: str, dim=None, seed=None, c=None) -> dict:
    # --jobs is deliberately excluded: it must never change report bytes.
    config = {"command": command}
    if command == "certify":
        config.update(
            input=args.input,
            brute_force=bool(args.brute_force),
            max_violations=args.max_violations,
        )
    else:
        config.update(dim=dim, seed=seed, c=str(c))
    return config


def _run_oracle(point_set, report) -> tuple[Optional[dict], bool]:
    """Compare the certified edge set against the facet oracle.  Returns
    (json fragment, agreement)."""
    lattice = brute_force_face_lattice(point_set)
    certified = {
        frozenset(rep.pair)
        for rep in report.two_neighborly.edge_reports
        if rep.verdict == "edge"
    } if report.two_neighborly is not None else set()
    agree = certified == set(lattice.edges)
    doc = {
        "ok": agree,
        "facets": len(lattice.facets),
        "edges": len(lattice.edges),
    }
    return doc, agree


def cmd_certify(args) -> int:
    try:
        point_set = load_point_set(args.input)
    except (OSError, FormatError) as exc:
        _emit({"error": str(exc), "theorem_ok": False, "version": __version__}, args.report)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = certify_theorem(
        point_set, jobs=args.jobs, max_violations=args.max_violations
    )
    oracle_doc = None
    agree = True
    if args.brute_force:
        try:
            oracle_doc, agree = _run_oracle(point_set, report)
        except GeometryError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    doc = theorem_report_json(
        report,
        version=__version__,
        config=_certify_config(args, "certify"),
        oracle=oracle_doc,
    )
    try:
        _emit(doc, args.report)
        if args.certificates and report.two_neighborly is not None:
            certs = [
                rep.certificate
                for rep in report.two_neighborly.edge_reports
                if rep.certificate is not None
            ]
            Path(args.certificates).write_text(format_certificates(certs), encoding="ascii")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report.ok and agree else EXIT_CHECK_FAILED


def cmd_bounds(args) -> int:
    if args.dim < 3:
        print(f"error: bounds require --dim >= 3, got {args.dim}", file=sys.stderr)
        return EXIT_USAGE
    table = bounds_table(args.dim)
    doc = {
        "d": table.dim,
        "vertex_lower": table.vertex_lower,
        "vertex_upper": table.vertex_upper,
        "known_exact": table.known_exact,
        "antipodal_max": table.antipodal_max,
        "acute_max": table.acute_max,
        "acute_lower": table.acute_lower,
        "three_neighborly_cap": _three_cap(table.dim),
        "version": __version__,
    }
    if args.n is not None:
        try:
            lower, upper = edge_bounds(args.dim, args.n)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        doc["n"] = args.n
        doc["edge_lower"] = str(lower)
        doc["edge_upper"] = str(upper)
    _emit(doc, None)
    return EXIT_OK


def _three_cap(dim: int) -> int:
    from .bounds import three_neighborly_vertex_cap

    return three_neighborly_vertex_cap(dim)


def cmd_demo(args) -> int:
    try:
        params = _make_params(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        point_set, trace = construct(params)
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    report = certify_theorem(point_set, jobs=args.jobs)
    doc = theorem_report_json(
        report,
        version=__version__,
        config=_certify_config(
            args, "demo", dim=params.dim, seed=params.seed, c=params.resolved_apex()
        ),
    )
    try:
        if args.out:
            save_point_set(point_set, args.out)
            write_json(trace_json(params, trace), args.out + ".trace.json")
        if args.report:
            write_json(doc, args.report)
        sys.stdout.write(dumps_json(doc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    handlers = {
        "construct": cmd_construct,
        "certify": cmd_certify,
        "bounds": cmd_bounds,
        "demo": cmd_demo,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
