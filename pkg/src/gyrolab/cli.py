"""Command-line interface.

Subcommands: build, analyze, net, fold-check, compare.  Exit codes:
0 success, 1 computation error (fit failures, bad meshes, failed match),
2 usage error.  All outputs are deterministic: byte-identical runs for
identical invocations, no timestamps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__, analysis, foldsim, netgen, qfield
from .solids import (
    build_pseudo_rhombicuboctahedron,
    build_rhombicuboctahedron,
    read_off,
    to_json,
    write_off,
)

SOLIDS = {
    "rco": ("rhombicuboctahedron", build_rhombicuboctahedron),
    "pseudo-rco": ("pseudo-rhombicuboctahedron", build_pseudo_rhombicuboctahedron),
}

DEFAULT_BUILD_EDGE = "5"  # cm semantics: 5 cm squares
DEFAULT_NET_EDGE = "50"  # mm


def _parse_edge_q2(parser: argparse.ArgumentParser, text: str):
    try:
        edge = qfield.parse(text)
    except ValueError as e:
        parser.error(str(e))
    if edge.sign() <= 0:
        parser.error(f"edge length must be positive, got {text!r}")
    return edge


def _parse_edge_mm(parser: argparse.ArgumentParser, text: str) -> Fraction:
    try:
        edge = Fraction(text)
    except (ValueError, ZeroDivisionError):
        parser.error(f"edge must be a rational number of millimetres, got {text!r}")
    if edge <= 0:
        parser.error(f"edge length must be positive, got {text!r}")
    return edge


def _write_output(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e


def cmd_build(parser, args) -> int:
    edge = _parse_edge_q2(parser, args.edge)
    name, builder = SOLIDS[args.solid]
    solid = builder(edge)
    if args.format == "off":
        _write_output(args.output, write_off(solid))
    else:
        _write_output(args.output, to_json(solid, name))
    return 0


def cmd_analyze(parser, args) -> int:
    if args.solid is not None:
        name, builder = SOLIDS[args.solid]
        poly = builder(_parse_edge_q2(parser, args.edge))
    else:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise OSError(f"cannot read {args.input}: {e}") from e
        poly = read_off(text)
        name = os.path.basename(args.input)
    report = analysis.analyze(poly, tolerance=args.tolerance, name=name)
    if args.json:
        sys.stdout.write(analysis.report_json(report))
    else:
        sys.stdout.write(analysis.text_report(report))
    return 0 if not report.partial else 1


def cmd_net(parser, args) -> int:
    edge = _parse_edge_mm(parser, args.edge)
    net = netgen.generate_nets(edge)
    svg = netgen.render_svg(net, args.paper)
    _write_output(args.output, svg)
    return 0


def cmd_fold_check(parser, args) -> int:
    net = netgen.generate_nets(Fraction(DEFAULT_NET_EDGE))
    result = foldsim.fold(net, args.gyration)
    if args.json:
        sys.stdout.write(json.dumps(result.to_json_dict(), indent=2) + "\n")
    else:
        n_checks = len(result.closure.checks)
        n_pass = sum(1 for c in result.closure.checks if c.passed)
        sys.stdout.write(f"fold-check: gyration {args.gyration}\n")
        sys.stdout.write(
            f"closure: {n_pass}/{n_checks} checks passed,"
            f" residual {result.closure_residual}\n"
        )
        if result.matched:
            sys.stdout.write(f"matched: {result.target_name}\n")
        else:
            sys.stdout.write(f"matched: NO (target {result.target_name})\n")
            for c in result.closure.failures():
                wit = ""
                if c.witness:
                    wit = " witness " + "; ".join(
                        "(" + ", ".join(str(x) for x in p) + ")" for p in c.witness
                    )
                sys.stdout.write(
                    f"  {c.name} {c.piece}{c.pos}: {c.detail}"
                    f" (distance {c.distance:.6g}){wit}\n"
                )
    return 0 if result.matched and result.closure.ok else 1


def cmd_compare(parser, args) -> int:
    edge = _parse_edge_q2(parser, args.edge)
    a = analysis.analyze(build_rhombicuboctahedron(edge), name="rhombicuboctahedron")
    b = analysis.analyze(
        build_pseudo_rhombicuboctahedron(edge), name="pseudo-rhombicuboctahedron"
    )
    table = analysis.compare(a, b)
    if args.json:
        sys.stdout.write(analysis.comparison_json(table))
    else:
        sys.stdout.write(table.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gyrolab",
        description=(
            "Exact-arithmetic toolkit for the rhombicuboctahedron and its"
            " gyrate (pseudo) twin: build the solids, count their rotation"
            " axes and equatorial belts, print papercraft nets, and verify"
            " the fold."
        ),
    )
    parser.add_argument("--version", action="version", version=f"gyrolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="write a solid as OFF or exact JSON")
    p_build.add_argument("--solid", required=True, choices=sorted(SOLIDS))
    p_build.add_argument("--edge", default=DEFAULT_BUILD_EDGE,
                         help="edge length (rational or Q(sqrt2) literal; default 5)")
    p_build.add_argument("--format", choices=("off", "json"), default="off")
    p_build.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p_build.set_defaults(func=cmd_build)

    p_an = sub.add_parser("analyze", help="full symmetry/belt/census analysis")
    src = p_an.add_mutually_exclusive_group(required=True)
    src.add_argument("--solid", choices=sorted(SOLIDS))
    src.add_argument("--input", metavar="FILE.off", help="analyze an OFF mesh")
    p_an.add_argument("--edge", default=DEFAULT_BUILD_EDGE)
    p_an.add_argument("--tolerance", type=float, default=1e-9,
                      help="tolerance for ingested meshes (default 1e-9)")
    p_an.add_argument("--json", action="store_true")
    p_an.set_defaults(func=cmd_analyze)

    p_net = sub.add_parser("net", help="emit the three-piece papercraft net as SVG")
    p_net.add_argument("--edge", default=DEFAULT_NET_EDGE,
                       help="square side in mm (default 50)")
    p_net.add_argument(
        "--paper",
        default=os.environ.get("GYROLAB_PAPER", "A2"),
        help="A2, A3, A4 or WIDTHxHEIGHT in mm (default A2; env GYROLAB_PAPER)",
    )
    p_net.add_argument("-o", "--output", required=True, help="output SVG file")
    p_net.set_defaults(func=cmd_net)

    p_fold = sub.add_parser("fold-check",
                            help="fold the nets and verify the assembled solid")
    p_fold.add_argument("--gyration", type=int, choices=(0, 45), default=0)
    p_fold.add_argument("--json", action="store_true")
    p_fold.set_defaults(func=cmd_fold_check)

    p_cmp = sub.add_parser("compare", help="side-by-side table of the two solids")
    p_cmp.add_argument("--edge", default=DEFAULT_BUILD_EDGE)
    p_cmp.add_argument("--json", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except (ValueError, OSError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
