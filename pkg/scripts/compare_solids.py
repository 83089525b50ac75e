#!/usr/bin/env python3
"""Run the full analysis of both solids and print the comparison table.

Writes machine-readable reports next to the console output:

    out/rhombicuboctahedron.json
    out/pseudo-rhombicuboctahedron.json
    out/comparison.json
"""

import json
import os

from gyrolab.analysis import analyze, compare, text_report
from gyrolab.solids import build_pseudo_rhombicuboctahedron, build_rhombicuboctahedron

OUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "out")


def main() -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    reports = {}
    for name, builder in (
        ("rhombicuboctahedron", build_rhombicuboctahedron),
        ("pseudo-rhombicuboctahedron", build_pseudo_rhombicuboctahedron),
    ):
        report = analyze(builder(5), name=name)
        reports[name] = report
        print(text_report(report))
        path = os.path.join(OUT_DIR, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
        print(f"wrote {path}\n")

    table = compare(*reports.values())
    print(table.to_text())
    path = os.path.join(OUT_DIR, "comparison.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, indent=2)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
