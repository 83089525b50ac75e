"""Polyhedron model, exact builders and mesh validation.

The two built-in solids share one construction path: generate the exact
vertex set over Q(sqrt2), then recover the faces as the supporting-plane
contact sets of the convex hull.  That keeps the gyrated builder honest:
re-identification of the octagonal ring after the 45-degree cap turn is
positional (exact coordinate coincidence), not index bookkeeping.

Canonical pose: vertex centroid at the origin, the polar axis along z,
the gyrated cap on top.  Vertices and faces are sorted canonically so
identical inputs produce byte-identical downstream artifacts.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import geom
from .geom import Vec3, vcross, vdot, vsub
from .qfield import ONE, SQRT2, Q2


class OffParseError(ValueError):
    """Malformed OFF input; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class FaceCensus:
    triangles: int
    quads: int
    other: int

    @property
    def total(self) -> int:
        return self.triangles + self.quads + self.other


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    open_edges: tuple[tuple[int, int], ...] = ()
    overfull_edges: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def passed(self, name: str) -> bool:
        return any(c.name == name and c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "open_edges": [list(e) for e in self.open_edges],
        }


class Polyhedron:
    """Immutable vertex/face mesh; adjacency derived once at construction.

    ``exact`` distinguishes Q2 coordinates from floats (ingested meshes).
    Adjacency is purely combinatorial and never raises on malformed
    indices; ``validate`` reports those instead.
    """

    def __init__(self, vertices: Sequence[Vec3], faces: Sequence[Sequence[int]],
                 exact: bool | None = None) -> None:
        self.vertices: tuple[Vec3, ...] = tuple(tuple(v) for v in vertices)
        self.faces: tuple[tuple[int, ...], ...] = tuple(tuple(f) for f in faces)
        if exact is None:
            exact = bool(self.vertices) and isinstance(self.vertices[0][0], Q2)
        self.exact = exact

        edge_faces: dict[tuple[int, int], list[int]] = {}
        for fi, face in enumerate(self.faces):
            for k in range(len(face)):
                i, j = face[k], face[(k + 1) % len(face)]
                key = (i, j) if i < j else (j, i)
                edge_faces.setdefault(key, []).append(fi)
        self.edge_faces: dict[tuple[int, int], tuple[int, ...]] = {
            e: tuple(fs) for e, fs in edge_faces.items()
        }
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(self.edge_faces))
        vertex_faces: dict[int, list[int]] = {}
        for fi, face in enumerate(self.faces):
            for i in face:
                vertex_faces.setdefault(i, []).append(fi)
        self.vertex_faces: dict[int, tuple[int, ...]] = {
            i: tuple(fs) for i, fs in vertex_faces.items()
        }
        self._cache: dict = {}

    # counts ---------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def vertex_centroid(self) -> Vec3:
        return geom.centroid(self.vertices)

    def face_center(self, fi: int) -> Vec3:
        return geom.centroid([self.vertices[i] for i in self.faces[fi]])

    def face_normal(self, fi: int) -> Vec3:
        """Cross product of the first two face edges (faces are convex)."""
        a, b, c = (self.vertices[i] for i in self.faces[fi][:3])
        return vcross(vsub(b, a), vsub(c, a))

    def other_face(self, edge: tuple[int, int], fi: int) -> int | None:
        fs = self.edge_faces.get(edge, ())
        if len(fs) != 2:
            return None
        return fs[0] if fs[1] == fi else fs[1]

    def vertex_index(self) -> dict[Vec3, int]:
        if "vertex_index" not in self._cache:
            self._cache["vertex_index"] = {v: i for i, v in enumerate(self.vertices)}
        return self._cache["vertex_index"]

    def face_index_sets(self) -> dict[frozenset, int]:
        if "face_sets" not in self._cache:
            self._cache["face_sets"] = {
                frozenset(f): i for i, f in enumerate(self.faces)
            }
        return self._cache["face_sets"]


# -- exact convex hull ------------------------------------------------------


def _ccw_sort_in_plane(indices: list[int], vertices: Sequence[Vec3],
                       normal: Vec3) -> list[int]:
    """Order coplanar points counterclockwise around their centroid,
    as seen from the tip of ``normal``.  Exact angular comparator."""
    c = geom.centroid([vertices[i] for i in indices])
    e1 = vsub(vertices[indices[0]], c)
    e2 = vcross(normal, e1)

    def coords(i: int):
        d = vsub(vertices[i], c)
        return vdot(d, e1), vdot(d, e2)

    def half(uw) -> int:
        u, w = uw
        if w.sign() > 0 or (w.is_zero() and u.sign() > 0):
            return 0
        return 1

    pts = {i: coords(i) for i in indices}

    def cmp(i: int, j: int) -> int:
        hi, hj = half(pts[i]), half(pts[j])
        if hi != hj:
            return -1 if hi < hj else 1
        ui, wi = pts[i]
        uj, wj = pts[j]
        cross = ui * wj - wi * uj
        s = cross.sign()
        return -s  # positive cross => i strictly before j going CCW

    return sorted(indices, key=functools.cmp_to_key(cmp))


def convex_hull_faces(vertices: Sequence[Vec3]) -> list[tuple[int, ...]]:
    """Faces of the convex hull of exact points in general convex position.

    Enumerates supporting planes through vertex triples; a plane with all
    remaining points strictly on one side contributes the face of every
    point it contains, wound counterclockwise around the outward normal.
    Intended for small vertex sets (the built-ins have 24).
    """
    n = len(vertices)
    seen_planes: set = set()
    faces: dict[frozenset, tuple[int, ...]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            eij = vsub(vertices[j], vertices[i])
            for k in range(j + 1, n):
                nrm = vcross(eij, vsub(vertices[k], vertices[i]))
                if geom.is_zero_vec(nrm):
                    continue
                d = geom.canonical_direction_q2(nrm)
                key = (d, vdot(d, vertices[i]))
                if key in seen_planes:
                    continue
                seen_planes.add(key)
                offs = [vdot(nrm, vsub(vertices[m], vertices[i])) for m in range(n)]
                signs = [o.sign() for o in offs]
                if any(s > 0 for s in signs) and any(s < 0 for s in signs):
                    continue
                members = [m for m in range(n) if signs[m] == 0]
                outward = nrm if any(s < 0 for s in signs) else geom.vneg(nrm)
                ordered = _ccw_sort_in_plane(members, vertices, outward)
                # canonical rotation: smallest index first, orientation kept
                lo = ordered.index(min(ordered))
                face = tuple(ordered[lo:] + ordered[:lo])
                faces[frozenset(face)] = face
    return sorted(faces.values(), key=lambda f: tuple(sorted(f)))


# -- builders ---------------------------------------------------------------


def _sorted_exact(points: Iterable[Vec3]) -> tuple[Vec3, ...]:
    return tuple(sorted(points))


def _from_exact_points(points: Iterable[Vec3]) -> Polyhedron:
    verts = _sorted_exact(points)
    return Polyhedron(verts, convex_hull_faces(verts), exact=True)


@functools.lru_cache(maxsize=None)
def build_rhombicuboctahedron(edge_len: Q2 | int | Fraction = 2) -> Polyhedron:
    """The 26-face solid with square edge ``edge_len``: all coordinate
    permutations of (±s, ±s, ±(1+sqrt2)s), s = edge_len/2."""
    s = _positive_half_edge(edge_len)
    t = (ONE + SQRT2) * s
    pts = set()
    for axis in range(3):
        for sx in (s, -s):
            for sy in (s, -s):
                for st in (t, -t):
                    p = [sx, sy]
                    p.insert(axis, st)
                    pts.add(tuple(p))
    return _from_exact_points(pts)


@functools.lru_cache(maxsize=None)
def build_pseudo_rhombicuboctahedron(edge_len: Q2 | int | Fraction = 2) -> Polyhedron:
    """The gyrate twin: the top cap turned 45 degrees about the polar axis.

    The octagonal ring at z = s maps onto itself, so only the 4 polar
    vertices move; the hull re-derives the cap faces from the new
    positions.
    """
    s = _positive_half_edge(edge_len)
    t = (ONE + SQRT2) * s
    cos45, sin45 = geom.exact_cos_sin(45)
    pts = set()
    for v in build_rhombicuboctahedron(edge_len).vertices:
        x, y, z = v
        if z == t:
            pts.add((x * cos45 - y * sin45, x * sin45 + y * cos45, z))
        else:
            pts.add(v)
    return _from_exact_points(pts)


def _positive_half_edge(edge_len) -> Q2:
    e = Q2.coerce(edge_len)
    if e.sign() <= 0:
        raise ValueError("edge length must be positive")
    return e * Q2(Fraction(1, 2))


# -- census and vertex figures ----------------------------------------------


def face_census(p: Polyhedron) -> FaceCensus:
    tri = sum(1 for f in p.faces if len(f) == 3)
    quad = sum(1 for f in p.faces if len(f) == 4)
    return FaceCensus(tri, quad, p.n_faces - tri - quad)


def vertex_figure(p: Polyhedron, v: int) -> tuple[int, ...]:
    """Cyclic face-degree sequence around vertex v in surface order,
    canonicalized up to rotation and reflection."""
    if v not in p.vertex_faces:
        raise KeyError(f"unknown vertex index {v}")
    incident = list(p.vertex_faces[v])
    # edges at v within each incident face
    def edges_at(fi: int) -> list[tuple[int, int]]:
        face = p.faces[fi]
        k = face.index(v)
        prev, nxt = face[k - 1], face[(k + 1) % len(face)]
        return [tuple(sorted((v, prev))), tuple(sorted((v, nxt)))]

    cycle = [incident[0]]
    used_edges: set = set()
    while True:
        cur = cycle[-1]
        nxt = None
        for e in edges_at(cur):
            if e in used_edges:
                continue
            g = p.other_face(e, cur)
            if g is None:
                raise ValueError(f"surface around vertex {v} is not closed")
            if g in incident and (len(cycle) == 1 or g != cycle[-2]):
                used_edges.add(e)
                nxt = g
                break
        if nxt is None or (nxt == cycle[0] and len(cycle) == len(incident)):
            break
        cycle.append(nxt)
        if len(cycle) > len(incident):
            raise ValueError(f"faces around vertex {v} do not form a cycle")
    if len(cycle) != len(incident):
        raise ValueError(f"faces around vertex {v} do not form a cycle")
    degs = [len(p.faces[fi]) for fi in cycle]
    return _canonical_cycle(degs)


def _canonical_cycle(seq: list[int]) -> tuple[int, ...]:
    best = None
    for s in (seq, seq[::-1]):
        for r in range(len(s)):
            cand = tuple(s[r:] + s[:r])
            if best is None or cand < best:
                best = cand
    return best


# -- validation ---------------------------------------------------------------


def validate(p: Polyhedron, tolerance: float | None = None) -> ValidationReport:
    """Structural and geometric checks; never raises on malformed input.

    Exact meshes use exact predicates; pass a tolerance for float meshes
    (required when ``p.exact`` is false).
    """
    if not p.exact and tolerance is None:
        tolerance = 1e-9
    checks: list[Check] = []
    n = p.n_vertices

    bad_idx = sorted(
        {i for f in p.faces for i in f if not (0 <= i < n)}
    )
    dup_faces = [f for f in p.faces if len(set(f)) != len(f)]
    small = [f for f in p.faces if len(f) < 3]
    structural_ok = not bad_idx and not dup_faces and not small
    detail = []
    if bad_idx:
        detail.append(f"dangling vertex indices {bad_idx}")
    if dup_faces:
        detail.append(f"{len(dup_faces)} faces with repeated vertices")
    if small:
        detail.append(f"{len(small)} faces with fewer than 3 vertices")
    checks.append(Check("indices", structural_ok, "; ".join(detail)))

    open_edges = tuple(e for e, fs in sorted(p.edge_faces.items()) if len(fs) == 1)
    overfull = tuple(e for e, fs in sorted(p.edge_faces.items()) if len(fs) > 2)
    manifold_ok = not open_edges and not overfull
    checks.append(
        Check(
            "manifold",
            manifold_ok,
            f"{len(open_edges)} open edges, {len(overfull)} edges on >2 faces"
            if not manifold_ok
            else "every edge shared by exactly 2 faces",
        )
    )

    directed: dict[tuple[int, int], int] = {}
    for f in p.faces:
        for k in range(len(f)):
            d = (f[k], f[(k + 1) % len(f)])
            directed[d] = directed.get(d, 0) + 1
    winding_ok = manifold_ok and all(
        directed.get((j, i), 0) == 1 for (i, j) in directed
    ) and all(c == 1 for c in directed.values())
    checks.append(
        Check(
            "winding",
            winding_ok,
            "shared edges traversed in opposite directions"
            if winding_ok
            else "inconsistent face orientations",
        )
    )

    if not structural_ok:
        return ValidationReport(tuple(checks), open_edges, overfull)

    planar_bad: list[int] = []
    outward_bad: list[int] = []
    convex_ok = True
    c = p.vertex_centroid()
    for fi, f in enumerate(p.faces):
        nrm = p.face_normal(fi)
        base = p.vertices[f[0]]
        if p.exact:
            if any(not vdot(nrm, vsub(p.vertices[i], base)).is_zero() for i in f):
                planar_bad.append(fi)
                continue
            if vdot(nrm, vsub(base, c)).sign() <= 0:
                outward_bad.append(fi)
            if any(
                vdot(nrm, vsub(v, base)).sign() > 0 for v in p.vertices
            ):
                convex_ok = False
        else:
            nn = math.sqrt(float(vdot(nrm, nrm)))
            if nn == 0.0:
                planar_bad.append(fi)
                continue
            if any(
                abs(float(vdot(nrm, vsub(p.vertices[i], base)))) / nn > tolerance
                for i in f
            ):
                planar_bad.append(fi)
                continue
            if float(vdot(nrm, vsub(base, c))) <= 0:
                outward_bad.append(fi)
            if any(
                float(vdot(nrm, vsub(v, base))) / nn > tolerance
                for v in p.vertices
            ):
                convex_ok = False
    checks.append(
        Check("planarity", not planar_bad,
              f"non-planar faces {planar_bad}" if planar_bad else "all faces planar")
    )
    checks.append(
        Check("outward", not outward_bad,
              f"inward-facing faces {outward_bad}" if outward_bad else
              "all face normals point away from the centroid")
    )
    checks.append(
        Check("convexity", convex_ok,
              "every vertex on the non-positive side of every face plane"
              if convex_ok else "a vertex lies strictly outside a face plane")
    )
    euler = p.euler_characteristic
    checks.append(Check("euler", euler == 2, f"V - E + F = {euler}"))
    return ValidationReport(tuple(checks), open_edges, overfull)


# -- OFF and JSON interchange -------------------------------------------------


def write_off(p: Polyhedron) -> str:
    """ASCII OFF with 17-significant-digit floats."""
    lines = ["OFF", f"{p.n_vertices} {p.n_faces} {p.n_edges}"]
    for v in p.vertices:
        lines.append(" ".join(f"{float(c):.17g}" for c in v))
    for f in p.faces:
        lines.append(" ".join(str(x) for x in (len(f), *f)))
    return "\n".join(lines) + "\n"


def read_off(text: str) -> Polyhedron:
    """Parse ASCII OFF into a float-mode polyhedron.

    Raises OffParseError with the offending line number; blank lines and
    ``#`` comments are skipped, trailing face color values are ignored.
    """
    numbered = [
        (ln, line.split("#", 1)[0].strip())
        for ln, line in enumerate(text.splitlines(), start=1)
    ]
    rows = [(ln, line) for ln, line in numbered if line]
    if not rows:
        raise OffParseError(1, "empty OFF document")
    pos = 0
    ln, header = rows[pos]
    if header != "OFF":
        raise OffParseError(ln, f"expected OFF header, got {header!r}")
    pos += 1
    if pos >= len(rows):
        raise OffParseError(ln, "missing counts line")
    ln, counts = rows[pos]
    parts = counts.split()
    if len(parts) != 3:
        raise OffParseError(ln, f"counts line must be 'V F E', got {counts!r}")
    try:
        nv, nf, _ = (int(x) for x in parts)
    except ValueError:
        raise OffParseError(ln, f"non-integer counts in {counts!r}") from None
    pos += 1
    verts: list[Vec3] = []
    for _ in range(nv):
        if pos >= len(rows):
            raise OffParseError(rows[-1][0], f"expected {nv} vertex lines")
        ln, line = rows[pos]
        parts = line.split()
        if len(parts) != 3:
            raise OffParseError(ln, f"vertex line needs 3 coordinates: {line!r}")
        try:
            verts.append(tuple(float(x) for x in parts))
        except ValueError:
            raise OffParseError(ln, f"bad coordinate in {line!r}") from None
        pos += 1
    faces: list[tuple[int, ...]] = []
    for _ in range(nf):
        if pos >= len(rows):
            raise OffParseError(rows[-1][0], f"expected {nf} face lines")
        ln, line = rows[pos]
        parts = line.split()
        try:
            k = int(parts[0])
            idx = tuple(int(x) for x in parts[1 : 1 + k])
        except (ValueError, IndexError):
            raise OffParseError(ln, f"bad face line {line!r}") from None
        if len(idx) != k:
            raise OffParseError(ln, f"face promises {k} indices: {line!r}")
        faces.append(idx)
        pos += 1
    return Polyhedron(verts, faces, exact=False)


def to_json_dict(p: Polyhedron, name: str = "") -> dict:
    """Exact model dump using the Q2 text serialization."""
    if not p.exact:
        raise ValueError("JSON model dump requires an exact polyhedron")
    return {
        "schema": "gyrolab/1",
        "kind": "polyhedron",
        "name": name,
        "vertices": [[str(c) for c in v] for v in p.vertices],
        "faces": [list(f) for f in p.faces],
    }


def to_json(p: Polyhedron, name: str = "") -> str:
    return json.dumps(to_json_dict(p, name), indent=2) + "\n"
