"""Cross-module report assembly and the two-solid comparison.

``analyze`` aggregates the census, symmetry, belt and vertex-figure
results into one deterministic report; ``compare`` renders the
side-by-side table that separates the rhombicuboctahedron from its
gyrate twin: same face census and vertex figures, very different
symmetry inventory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import belts as belts_mod
from .belts import Belt, BeltOverlap
from .geom import vdot, vsub
from .solids import (
    FaceCensus,
    Polyhedron,
    ValidationReport,
    face_census,
    validate,
    vertex_figure,
)
from .symmetry import SymmetryReport, symmetry_report

SCHEMA = "gyrolab/1"


@dataclass(frozen=True)
class AnalysisReport:
    name: str
    mode: str  # "exact" | "float"
    validation: ValidationReport
    partial: bool
    census: FaceCensus
    vertex_count: int
    edge_count: int
    face_count: int
    euler: int
    vertex_figures: tuple[tuple[int, ...], ...]
    uniform_vertex_figure: bool
    faces_regular: bool
    symmetry: Optional[SymmetryReport]
    belts: tuple[Belt, ...]
    belt_overlap: Optional[BeltOverlap]
    archimedean_candidate: bool
    pseudo_uniform: bool

    @property
    def pole_pair_count(self) -> int:
        return sum(1 for b in self.belts if b.pole_faces is not None)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "analysis",
            "name": self.name,
            "mode": self.mode,
            "partial": self.partial,
            "validation": self.validation.to_dict(),
            "census": {
                "triangles": self.census.triangles,
                "quads": self.census.quads,
                "other": self.census.other,
            },
            "counts": {
                "vertices": self.vertex_count,
                "edges": self.edge_count,
                "faces": self.face_count,
                "euler": self.euler,
            },
            "vertex_figures": {
                "uniform": self.uniform_vertex_figure,
                "figures": [list(f) for f in self.vertex_figures],
            },
            "faces_regular": self.faces_regular,
            "symmetry": self.symmetry.to_dict() if self.symmetry else None,
            "belts": [b.to_dict() for b in self.belts],
            "belt_overlap": (
                {
                    "pairwise": {
                        f"{i},{j}": n for (i, j), n in sorted(self.belt_overlap.pairwise.items())
                    },
                    "union": self.belt_overlap.union_size,
                    "quads": self.belt_overlap.quad_count,
                }
                if self.belt_overlap
                else None
            ),
            "flags": {
                "archimedean_candidate": self.archimedean_candidate,
                "pseudo_uniform": self.pseudo_uniform,
            },
        }


def _faces_regular(p: Polyhedron, tolerance: float) -> bool:
    """Equal edge lengths plus per-face equal corner angles (planarity is
    already covered by validation); no full Archimedean classification."""
    edge_sqs = set()
    corner_ratios = True
    for (i, j) in p.edges:
        d = vsub(p.vertices[j], p.vertices[i])
        edge_sqs.add(vdot(d, d) if p.exact else round(float(vdot(d, d)), 9))
        if len(edge_sqs) > 1:
            if p.exact:
                return False
            lo, hi = min(edge_sqs), max(edge_sqs)
            if hi - lo > tolerance * max(1.0, hi):
                return False
            edge_sqs = {lo}
    for f in p.faces:
        n = len(f)
        cos_sqs = set()
        for k in range(n):
            a = vsub(p.vertices[f[(k - 1) % n]], p.vertices[f[k]])
            b = vsub(p.vertices[f[(k + 1) % n]], p.vertices[f[k]])
            dot = vdot(a, b)
            denom = vdot(a, a) * vdot(b, b)
            if p.exact:
                cos_sqs.add((dot * dot / denom, dot.sign()))
            else:
                cos_sqs.add(
                    (round(float(dot) * float(dot) / float(denom), 9),
                     float(dot) > 0)
                )
        if len(cos_sqs) > 1:
            corner_ratios = False
            break
    return corner_ratios


def analyze(p: Polyhedron, tolerance: float = 1e-9, name: str = "") -> AnalysisReport:
    """Full per-solid report; validation failures yield a partial report
    (census and counts only) instead of raising."""
    report = validate(p, None if p.exact else tolerance)
    census = face_census(p)
    base = dict(
        name=name,
        mode="exact" if p.exact else "float",
        validation=report,
        census=census,
        vertex_count=p.n_vertices,
        edge_count=p.n_edges,
        face_count=p.n_faces,
        euler=p.euler_characteristic,
    )
    if not report.ok:
        return AnalysisReport(
            partial=True,
            vertex_figures=(),
            uniform_vertex_figure=False,
            faces_regular=False,
            symmetry=None,
            belts=(),
            belt_overlap=None,
            archimedean_candidate=False,
            pseudo_uniform=False,
            **base,
        )
    figures = sorted({vertex_figure(p, v) for v in range(p.n_vertices)})
    uniform = len(figures) == 1
    sym = symmetry_report(p, tolerance)
    belts = belts_mod.find_belts(p, tolerance)
    overlap = belts_mod.belt_square_overlap(p, tolerance) if belts else None
    regular = _faces_regular(p, tolerance)
    return AnalysisReport(
        partial=False,
        vertex_figures=tuple(figures),
        uniform_vertex_figure=uniform,
        faces_regular=regular,
        symmetry=sym,
        belts=belts,
        belt_overlap=overlap,
        archimedean_candidate=sym.vertex_transitive and uniform,
        pseudo_uniform=uniform and not sym.vertex_transitive,
        **base,
    )


def text_report(r: AnalysisReport) -> str:
    """Human-readable summary; the last line carries the axis count."""
    lines = [f"analysis: {r.name or 'polyhedron'} ({r.mode})"]
    lines.append(f"validation: {'ok' if r.validation.ok else 'FAILED'}")
    if not r.validation.ok:
        for c in r.validation.checks:
            if not c.passed:
                lines.append(f"  {c.name}: {c.detail}")
        if r.validation.open_edges:
            lines.append(f"  open edges: {list(r.validation.open_edges)}")
    lines.append(
        f"faces: {r.face_count} ({r.census.triangles} triangles,"
        f" {r.census.quads} quads"
        + (f", {r.census.other} other)" if r.census.other else ")")
    )
    lines.append(
        f"vertices: {r.vertex_count}, edges: {r.edge_count},"
        f" Euler characteristic: {r.euler}"
    )
    if r.partial:
        lines.append("analysis stopped: validation failed")
        return "\n".join(lines) + "\n"
    figs = ", ".join("(" + ",".join(map(str, f)) + ")" for f in r.vertex_figures)
    lines.append(
        f"vertex figures: {figs}{' (uniform)' if r.uniform_vertex_figure else ''}"
    )
    lines.append(f"faces regular: {'yes' if r.faces_regular else 'no'}")
    belt_lens = ", ".join(str(b.length) for b in r.belts) or "none"
    lines.append(
        f"equatorial belts: {len(r.belts)} (lengths: {belt_lens});"
        f" pole pairs: {r.pole_pair_count}"
    )
    sym = r.symmetry
    lines.append(
        f"symmetry group: {sym.full_order} (proper {sym.proper_order})"
        + (" [approximate]" if sym.approximate else "")
    )
    by_order = sym.axes_by_order()
    breakdown = " + ".join(
        f"{by_order[o]} of order {o}" for o in sorted(by_order, reverse=True)
    )
    lines.append(f"axis breakdown: {breakdown or 'none'}")
    lines.append(
        f"vertex transitive: {'yes' if sym.vertex_transitive else 'no'}"
        f" ({len(sym.orbit_sizes)} orbit"
        f"{'s' if len(sym.orbit_sizes) != 1 else ''}:"
        f" {', '.join(map(str, sym.orbit_sizes))})"
    )
    lines.append(
        f"archimedean candidate: {'yes' if r.archimedean_candidate else 'no'};"
        f" pseudo uniform: {'yes' if r.pseudo_uniform else 'no'}"
    )
    lines.append(f"rotation axes: {len(sym.axes)}")
    return "\n".join(lines) + "\n"


# -- comparison ---------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    left: str
    right: str

    @property
    def equal(self) -> bool:
        return self.left == self.right


@dataclass(frozen=True)
class ComparisonTable:
    left_name: str
    right_name: str
    rows: tuple[ComparisonRow, ...]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "comparison",
            "left": self.left_name,
            "right": self.right_name,
            "rows": [
                {"label": r.label, "left": r.left, "right": r.right, "equal": r.equal}
                for r in self.rows
            ],
        }

    def to_text(self) -> str:
        lines = [f"comparison: {self.left_name} vs {self.right_name}"]
        for r in self.rows:
            marker = "=" if r.equal else "!"
            lines.append(f"{r.label}: {r.left} | {r.right}  [{marker}]")
        return "\n".join(lines) + "\n"


def compare(a: AnalysisReport, b: AnalysisReport) -> ComparisonTable:
    def axis_breakdown(r: AnalysisReport) -> str:
        if r.symmetry is None:
            return "-"
        by = r.symmetry.axes_by_order()
        return " + ".join(f"{by[o]}x order {o}" for o in sorted(by, reverse=True)) or "0"

    def yn(v: bool) -> str:
        return "yes" if v else "no"

    rows = [
        ComparisonRow("faces", str(a.face_count), str(b.face_count)),
        ComparisonRow("triangles", str(a.census.triangles), str(b.census.triangles)),
        ComparisonRow("quads", str(a.census.quads), str(b.census.quads)),
        ComparisonRow("vertices", str(a.vertex_count), str(b.vertex_count)),
        ComparisonRow("edges", str(a.edge_count), str(b.edge_count)),
        ComparisonRow(
            "vertex figure",
            ", ".join("(" + ",".join(map(str, f)) + ")" for f in a.vertex_figures),
            ", ".join("(" + ",".join(map(str, f)) + ")" for f in b.vertex_figures),
        ),
        ComparisonRow(
            "proper group order",
            str(a.symmetry.proper_order if a.symmetry else "-"),
            str(b.symmetry.proper_order if b.symmetry else "-"),
        ),
        ComparisonRow(
            "full group order",
            str(a.symmetry.full_order if a.symmetry else "-"),
            str(b.symmetry.full_order if b.symmetry else "-"),
        ),
        ComparisonRow(
            "axes",
            str(len(a.symmetry.axes) if a.symmetry else "-"),
            str(len(b.symmetry.axes) if b.symmetry else "-"),
        ),
        ComparisonRow("axis breakdown", axis_breakdown(a), axis_breakdown(b)),
        ComparisonRow("belts", str(len(a.belts)), str(len(b.belts))),
        ComparisonRow("pole pairs", str(a.pole_pair_count), str(b.pole_pair_count)),
        ComparisonRow(
            "vertex transitive",
            yn(a.symmetry.vertex_transitive if a.symmetry else False),
            yn(b.symmetry.vertex_transitive if b.symmetry else False),
        ),
        ComparisonRow(
            "archimedean candidate",
            yn(a.archimedean_candidate),
            yn(b.archimedean_candidate),
        ),
        ComparisonRow("pseudo uniform", yn(a.pseudo_uniform), yn(b.pseudo_uniform)),
    ]
    return ComparisonTable(a.name or "left", b.name or "right", tuple(rows))


def report_json(r: AnalysisReport) -> str:
    return json.dumps(r.to_dict(), indent=2) + "\n"


def comparison_json(t: ComparisonTable) -> str:
    return json.dumps(t.to_dict(), indent=2) + "\n"
