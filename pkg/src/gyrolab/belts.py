"""Equatorial belt (zone) detection and pole pairs.

A belt is found combinatorially: start on a quadrilateral, leave through
the edge opposite the entry edge, and keep going; a walk that returns to
its start without ever entering a non-quad face is a closed band of
squares.  No equator-plane search, so the result is pose-independent and
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import geom
from .geom import Vec3, vdot, vsub
from .qfield import Q2
from .solids import Polyhedron


@dataclass(frozen=True)
class Belt:
    """Closed cyclic band of quads glued along opposite edges."""

    faces: tuple[int, ...]
    crossing_edges: tuple[tuple[int, int], ...]
    plane_normal: Vec3  # common direction of the crossing edges
    pole_faces: Optional[tuple[int, int]] = None

    @property
    def length(self) -> int:
        return len(self.faces)

    def to_dict(self) -> dict:
        normal = [
            str(c) if isinstance(c, Q2) else float(c) for c in self.plane_normal
        ]
        return {
            "faces": list(self.faces),
            "length": self.length,
            "normal": normal,
            "poles": list(self.pole_faces) if self.pole_faces else None,
        }


@dataclass(frozen=True)
class BeltOverlap:
    pairwise: dict
    union_size: int
    quad_count: int


def _opposite_edge(face: tuple[int, ...], edge: tuple[int, int]) -> tuple[int, int]:
    # in a quad, the edge sharing no vertex with the entry edge
    rest = [v for v in face if v not in edge]
    return (rest[0], rest[1]) if rest[0] < rest[1] else (rest[1], rest[0])


def _edge_direction(p: Polyhedron, edge: tuple[int, int]) -> Vec3:
    return vsub(p.vertices[edge[1]], p.vertices[edge[0]])


def _parallel(p: Polyhedron, e1, e2, tolerance: float) -> bool:
    cr = geom.vcross(_edge_direction(p, e1), _edge_direction(p, e2))
    if p.exact:
        return geom.is_zero_vec(cr)
    return math.sqrt(float(vdot(cr, cr))) <= tolerance


def find_belts(p: Polyhedron, tolerance: float = 1e-9) -> tuple[Belt, ...]:
    """Every maximal closed zone walk over quads, deduplicated up to
    rotation/reversal; walks that hit a non-quad face are discarded.
    Crossing edges must be mutually parallel (exactly, in exact mode)."""
    belts: dict[frozenset, Belt] = {}
    for start_face, face in enumerate(p.faces):
        if len(face) != 4:
            continue
        start_edges = [
            tuple(sorted((face[0], face[1]))),
            tuple(sorted((face[1], face[2]))),
        ]
        for start_edge in start_edges:
            walk_faces: list[int] = []
            walk_edges: list[tuple[int, int]] = []
            fi, entry = start_face, start_edge
            ok = False
            for _ in range(2 * p.n_faces + 1):
                if len(p.faces[fi]) != 4:
                    break
                walk_faces.append(fi)
                walk_edges.append(entry)
                exit_edge = _opposite_edge(p.faces[fi], entry)
                nxt = p.other_face(exit_edge, fi)
                if nxt is None:
                    break
                fi, entry = nxt, exit_edge
                if (fi, entry) == (start_face, start_edge):
                    ok = True
                    break
            if not ok:
                continue
            key = frozenset(walk_faces)
            if key in belts:
                continue
            d0 = walk_edges[0]
            if not all(_parallel(p, d0, e, tolerance) for e in walk_edges[1:]):
                continue
            normal = _edge_direction(p, d0)
            if p.exact:
                normal = geom.canonical_direction_q2(normal)
            else:
                nrm = math.sqrt(float(vdot(normal, normal)))
                normal = tuple(c / nrm for c in normal)
                lead = next(c for c in normal if abs(c) > 1e-6)
                if lead < 0:
                    normal = tuple(-c for c in normal)
                normal = tuple(round(c, 9) for c in normal)
            belts[key] = Belt(tuple(walk_faces), tuple(walk_edges), normal)
    ordered = sorted(belts.values(), key=lambda b: b.faces)
    return tuple(
        Belt(b.faces, b.crossing_edges, b.plane_normal, pole_pairs(p, b, tolerance))
        for b in ordered
    )


def pole_pairs(
    p: Polyhedron, belt: Belt, tolerance: float = 1e-9
) -> Optional[tuple[int, int]]:
    """The two faces whose centers lie on the belt axis (the line through
    the centroid along the belt normal); None when no face qualifies."""
    c = p.vertex_centroid()
    d = belt.plane_normal
    hits: list[tuple[int, object]] = []
    for fi in range(p.n_faces):
        ctr = p.face_center(fi)
        rel = vsub(ctr, c)
        cr = geom.vcross(rel, d)
        if p.exact:
            if geom.is_zero_vec(cr) and not geom.is_zero_vec(rel):
                hits.append((fi, vdot(rel, d)))
        else:
            rel_n = math.sqrt(float(vdot(rel, rel)))
            if rel_n > tolerance and math.sqrt(float(vdot(cr, cr))) <= tolerance * max(
                1.0, rel_n
            ):
                hits.append((fi, float(vdot(rel, d))))
    if len(hits) != 2:
        return None
    sides = sorted(
        hits, key=lambda h: (h[1].sign() if isinstance(h[1], Q2) else h[1]) < 0
    )
    if len({(h[1].sign() if isinstance(h[1], Q2) else (h[1] > 0)) for h in hits}) != 2:
        return None
    return (sides[0][0], sides[1][0])


def belt_square_overlap(p: Polyhedron, tolerance: float = 1e-9) -> BeltOverlap:
    """Pairwise face intersections between belts plus their union size,
    against the quad census."""
    belts = find_belts(p, tolerance)
    sets = [set(b.faces) for b in belts]
    pairwise = {
        (i, j): len(sets[i] & sets[j])
        for i in range(len(sets))
        for j in range(i + 1, len(sets))
    }
    union = set().union(*sets) if sets else set()
    quads = sum(1 for f in p.faces if len(f) == 4)
    return BeltOverlap(pairwise, len(union), quads)
