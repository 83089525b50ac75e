#!/usr/bin/env python3
"""Produce the printable A2 net and verify both assemblies by rigid fold.

Outputs out/nets_a2.svg (5 cm squares) plus OFF snapshots of the two
folded models for external viewers.
"""

import os

from gyrolab.foldsim import fold
from gyrolab.netgen import generate_nets, render_svg

OUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "out")


def main() -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    net = generate_nets(50)
    svg_path = os.path.join(OUT_DIR, "nets_a2.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(net, "A2"))
    print(f"wrote {svg_path}")

    for gyration in (0, 45):
        result = fold(net, gyration)
        status = "ok" if result.matched and result.closure.ok else "FAILED"
        print(
            f"gyration {gyration:>2}: assembled {result.target_name}"
            f" [{status}], closure residual {result.closure_residual}"
        )
        off_path = os.path.join(OUT_DIR, f"assembled_gyration{gyration}.off")
        with open(off_path, "w", encoding="utf-8") as fh:
            fh.write(result.to_off())
        print(f"wrote {off_path}")


if __name__ == "__main__":
    main()
