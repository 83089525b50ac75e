"""Isometry-group detection, rotation axes and vertex transitivity.

The group search is deliberately brute force: fix one flag (vertex,
incident edge, incident face), try every flag of the mesh as its image,
solve the 3x3 linear system sending three independent base points to the
image points, and keep the matrix iff it is orthogonal with determinant
+-1 and permutes both the vertex set and the face set.  The result is
verified closed under composition and inverse.  No point-group tables:
the verification is the point.

Exact meshes run entirely over Q(sqrt2).  Float meshes (ingested OFF)
run the same search with a tolerance, then try to snap every matrix
entry back into Q(sqrt2); when all entries snap, axis extraction reuses
the exact code, otherwise the report is marked approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from . import geom
from .geom import Mat3, Vec3, mat_mul, mat_transpose, mat_vec, vdot, vsub
from .qfield import ONE, SQRT2, ZERO, Q2
from .solids import Polyhedron


class DegenerateGeometryError(ValueError):
    """Mesh has no three linearly independent vertices."""


class InternalGeometryError(RuntimeError):
    """A symmetry axis missed every surface feature: indicates a bug."""


@dataclass(frozen=True)
class Isometry:
    """Orthogonal map (about the vertex centroid) permuting the mesh."""

    matrix: Mat3
    proper: bool
    exact: bool
    vertex_perm: tuple[int, ...]
    face_perm: tuple[int, ...]

    def order(self) -> int:
        """Smallest n with self^n = identity, via the vertex permutation.

        The vertices span 3-space, so the permutation determines the
        matrix and their orders agree.
        """
        n = len(self.vertex_perm)
        perm = self.vertex_perm
        cur = perm
        k = 1
        ident = tuple(range(n))
        while cur != ident:
            cur = tuple(perm[i] for i in cur)
            k += 1
        return k


@dataclass(frozen=True)
class Feature:
    """A surface feature met by an axis: face center, vertex or edge midpoint."""

    kind: str  # "face" | "vertex" | "edge"
    ref: object  # face/vertex index or (i, j) edge pair
    point: Vec3

    def to_dict(self) -> dict:
        pt = [str(c) if isinstance(c, Q2) else float(c) for c in self.point]
        return {"type": self.kind, "point": pt}


@dataclass(frozen=True)
class RotationAxis:
    direction: Vec3  # canonical: first nonzero component +1 (exact mode)
    order: int
    features: tuple[Feature, Feature] | None = None

    def to_dict(self) -> dict:
        d = [str(c) if isinstance(c, Q2) else float(c) for c in self.direction]
        return {
            "direction": d,
            "order": self.order,
            "features": [f.to_dict() for f in self.features] if self.features else None,
        }


@dataclass(frozen=True)
class SymmetryReport:
    proper_order: int
    full_order: int
    axes: tuple[RotationAxis, ...]
    vertex_transitive: bool
    vertex_transitive_proper: bool
    orbit_sizes: tuple[int, ...]
    class_equation_ok: bool
    approximate: bool

    def axis_count(self) -> int:
        return len(self.axes)

    def axes_by_order(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for ax in self.axes:
            out[ax.order] = out.get(ax.order, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "proper_order": self.proper_order,
            "full_order": self.full_order,
            "axes": [ax.to_dict() for ax in self.axes],
            "vertex_transitive": self.vertex_transitive,
            "vertex_transitive_proper": self.vertex_transitive_proper,
            "orbits": {
                "count": len(self.orbit_sizes),
                "sizes": list(self.orbit_sizes),
            },
            "class_equation_ok": self.class_equation_ok,
            "approximate": self.approximate,
        }


# -- group search -------------------------------------------------------------


def _translated_vertices(p: Polyhedron) -> tuple[Vec3, ...]:
    c = p.vertex_centroid()
    if p.exact:
        if all(x.is_zero() for x in c):
            return p.vertices
    elif all(abs(x) < 1e-15 for x in c):
        return p.vertices
    return tuple(vsub(v, c) for v in p.vertices)


def _flags(p: Polyhedron):
    for (i, j) in p.edges:
        for (a, b) in ((i, j), (j, i)):
            for fi in p.edge_faces[(i, j)]:
                face = p.faces[fi]
                k = face.index(b)
                prev, nxt = face[k - 1], face[(k + 1) % len(face)]
                c = nxt if prev == a else prev
                yield a, b, c


def _base_flag(p: Polyhedron, verts: Sequence[Vec3], exact: bool):
    for a, b, c in _flags(p):
        cols = geom.mat_from_columns(verts[a], verts[b], verts[c])
        det = geom.mat_det(cols)
        if (exact and not det.is_zero()) or (not exact and abs(det) > 1e-9):
            return (a, b, c), cols
    raise DegenerateGeometryError("no three linearly independent vertices")


def _float_inverse(m: Mat3) -> Mat3:
    det = geom.mat_det(m)
    cof = []
    for i in range(3):
        row = []
        for j in range(3):
            sub = [
                [m[r][c] for c in range(3) if c != j]
                for r in range(3) if r != i
            ]
            d2 = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            row.append(((-1) ** (i + j)) * d2)
        cof.append(row)
    return tuple(tuple(cof[j][i] / det for j in range(3)) for i in range(3))


def _vertex_perm_exact(verts: Sequence[Vec3], index: dict, m: Mat3):
    perm = []
    for v in verts:
        w = mat_vec(m, v)
        k = index.get(w)
        if k is None:
            return None
        perm.append(k)
    return tuple(perm)


def _vertex_perm_float(verts: Sequence[Vec3], m: Mat3, tol: float):
    perm = []
    for v in verts:
        w = mat_vec(m, v)
        k = None
        for i, u in enumerate(verts):
            if (
                abs(w[0] - u[0]) <= tol
                and abs(w[1] - u[1]) <= tol
                and abs(w[2] - u[2]) <= tol
            ):
                k = i
                break
        if k is None:
            return None
        perm.append(k)
    return tuple(perm)


def _face_perm(p: Polyhedron, vperm: tuple[int, ...]):
    sets = p.face_index_sets()
    out = []
    for f in p.faces:
        g = sets.get(frozenset(vperm[i] for i in f))
        if g is None:
            return None
        out.append(g)
    return tuple(out)


def _verify_group(isos: Sequence[Isometry]) -> None:
    perms = {iso.vertex_perm for iso in isos}
    n = len(isos[0].vertex_perm)
    ident = tuple(range(n))
    if ident not in perms:
        raise AssertionError("isometry group lacks the identity")
    for a in isos:
        inv = [0] * n
        for i, j in enumerate(a.vertex_perm):
            inv[j] = i
        if tuple(inv) not in perms:
            raise AssertionError("isometry group not closed under inverse")
        for b in isos:
            comp = tuple(a.vertex_perm[j] for j in b.vertex_perm)
            if comp not in perms:
                raise AssertionError("isometry group not closed under composition")


def isometry_group(
    p: Polyhedron, proper_only: bool = False, tolerance: float = 1e-9
) -> tuple[Isometry, ...]:
    """All orthogonal maps (about the vertex centroid) sending the vertex
    set onto itself and preserving the face set, in canonical order.

    Exact meshes use exact arithmetic throughout; float meshes use the
    given tolerance and snap matrices back to Q(sqrt2) when possible.
    """
    cache_key = "isometry_group"
    if cache_key not in p._cache:
        p._cache[cache_key] = (
            _isometry_group_exact(p) if p.exact else _isometry_group_float(p, tolerance)
        )
    group = p._cache[cache_key]
    if proper_only:
        return tuple(iso for iso in group if iso.proper)
    return group


def _isometry_group_exact(p: Polyhedron) -> tuple[Isometry, ...]:
    verts = _translated_vertices(p)
    index = {v: i for i, v in enumerate(verts)}
    (a, b, c), base_cols = _base_flag(p, verts, exact=True)
    base_inv = geom.mat_inverse_q2(base_cols)
    ident = geom.q2_identity()
    found: dict[tuple, Isometry] = {}
    for (wa, wb, wc) in _flags(p):
        img_cols = geom.mat_from_columns(verts[wa], verts[wb], verts[wc])
        m = mat_mul(img_cols, base_inv)
        if mat_mul(mat_transpose(m), m) != ident:
            continue
        det = geom.mat_det(m)
        if det == ONE:
            proper = True
        elif det == -ONE:
            proper = False
        else:
            continue
        vperm = _vertex_perm_exact(verts, index, m)
        if vperm is None:
            continue
        fperm = _face_perm(p, vperm)
        if fperm is None:
            continue
        found.setdefault(m, Isometry(m, proper, True, vperm, fperm))
    isos = sorted(found.values(), key=lambda iso: iso.matrix)
    _verify_group(isos)
    return tuple(isos)


def _isometry_group_float(p: Polyhedron, tol: float) -> tuple[Isometry, ...]:
    verts = _translated_vertices(p)
    (a, b, c), base_cols = _base_flag(p, verts, exact=False)
    base_inv = _float_inverse(base_cols)
    found: dict[tuple, tuple[Mat3, bool, tuple, tuple]] = {}
    for (wa, wb, wc) in _flags(p):
        img_cols = geom.mat_from_columns(verts[wa], verts[wb], verts[wc])
        m = mat_mul(img_cols, base_inv)
        mtm = mat_mul(mat_transpose(m), m)
        if any(
            abs(mtm[i][j] - (1.0 if i == j else 0.0)) > 1e-7
            for i in range(3)
            for j in range(3)
        ):
            continue
        det = geom.mat_det(m)
        if abs(abs(det) - 1.0) > 1e-7:
            continue
        vperm = _vertex_perm_float(verts, m, max(tol, 1e-12))
        if vperm is None:
            continue
        fperm = _face_perm(p, vperm)
        if fperm is None:
            continue
        key = tuple(round(m[i][j], 6) for i in range(3) for j in range(3))
        found.setdefault(key, (m, det > 0, vperm, fperm))
    isos = []
    for m, proper, vperm, fperm in found.values():
        snapped = snap_matrix_to_q2(m, tol=1e-9)
        if snapped is not None:
            isos.append(Isometry(snapped, proper, True, vperm, fperm))
        else:
            isos.append(Isometry(m, proper, False, vperm, fperm))
    isos.sort(key=lambda iso: tuple(float(x) for row in iso.matrix for x in row))
    _verify_group(isos)
    return tuple(isos)


# -- float -> Q2 snapping ------------------------------------------------------


_SQRT2_F = math.sqrt(2.0)


def snap_scalar_to_q2(x: float, tol: float = 1e-9, max_den: int = 64) -> Q2 | None:
    """Nearest representable a + b*sqrt2 within tol, small denominators.

    Pure rationals and pure sqrt2 multiples are searched up to
    ``max_den``; mixed values only over small coefficients (denominator
    up to 8, magnitude up to 2), which covers every entry an orthogonal
    matrix over Q(sqrt2) at this scale can have.
    """
    r = Fraction(x).limit_denominator(max_den)
    if abs(x - float(r)) <= tol:
        return Q2(r)
    s = Fraction(x / _SQRT2_F).limit_denominator(max_den)
    if abs(x - float(s) * _SQRT2_F) <= tol:
        return Q2(0, s)
    for q in range(1, 9):
        for num in range(-2 * q, 2 * q + 1):
            a = Fraction(num, q)
            b = Fraction((x - float(a)) / _SQRT2_F).limit_denominator(8)
            if abs(b) <= 2 and abs(x - float(a) - float(b) * _SQRT2_F) <= tol:
                return Q2(a, b)
    return None


def snap_matrix_to_q2(m: Mat3, tol: float = 1e-9) -> Mat3 | None:
    rows = []
    for row in m:
        out = []
        for x in row:
            q = snap_scalar_to_q2(x, tol)
            if q is None:
                return None
            out.append(q)
        rows.append(tuple(out))
    return tuple(rows)


# -- rotation axes -------------------------------------------------------------


# traces 1 + 2cos(2 pi k/n) (gcd(k, n) = 1) that are representable in Q(sqrt2)
_ALLOWED_TRACES = {
    2: (Q2(-1),),
    3: (Q2(0),),
    4: (Q2(1),),
    6: (Q2(2),),
    8: (ONE + SQRT2, ONE - SQRT2),
}


def rotation_axes(group: Iterable[Isometry]) -> tuple[RotationAxis, ...]:
    """Fixed lines of the non-identity rotations, deduplicated by
    canonical direction; order = maximal rotation order about the line."""
    rotations = [iso for iso in group if iso.proper]
    if not rotations:
        return ()
    exact = rotations[0].exact
    axes: dict[tuple, int] = {}
    for iso in rotations:
        if iso.order() == 1:
            continue
        d = _fixed_direction(iso.matrix, exact)
        order = iso.order()
        if exact:
            _verify_rotation(iso, order)
        key = d
        axes[key] = max(axes.get(key, 0), order)
    out = [RotationAxis(d, n) for d, n in axes.items()]
    if exact:
        out.sort(key=lambda ax: (-ax.order, ax.direction))
    else:
        out.sort(key=lambda ax: (-ax.order, tuple(float(x) for x in ax.direction)))
    return tuple(out)


def _fixed_direction(m: Mat3, exact: bool) -> Vec3:
    if exact:
        ident = geom.q2_identity()
        diff = tuple(
            tuple(m[i][j] - ident[i][j] for j in range(3)) for i in range(3)
        )
        v = geom.kernel_vector_q2(diff)
        if v is None:
            raise ValueError("matrix has no fixed line (is it the identity?)")
        return geom.canonical_direction_q2(v)
    return _fixed_direction_float(m)


def _fixed_direction_float(m: Mat3) -> Vec3:
    # axis from the skew part; fall back to columns of M + I for half-turns
    v = (m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1])
    nrm = math.sqrt(sum(x * x for x in v))
    if nrm < 1e-9:
        cols = [tuple(m[i][j] + (1.0 if i == j else 0.0) for i in range(3)) for j in range(3)]
        v = max(cols, key=lambda c: sum(x * x for x in c))
        nrm = math.sqrt(sum(x * x for x in v))
    v = tuple(x / nrm for x in v)
    lead = next(x for x in v if abs(x) > 1e-6)
    if lead < 0:
        v = tuple(-x for x in v)
    return tuple(round(x, 9) for x in v)


def _verify_rotation(iso: Isometry, order: int) -> None:
    trace = iso.matrix[0][0] + iso.matrix[1][1] + iso.matrix[2][2]
    elem_order = iso.order()
    allowed = _ALLOWED_TRACES.get(elem_order)
    if allowed is None or trace not in allowed:
        raise InternalGeometryError(
            f"rotation of order {elem_order} has unexpected trace {trace}"
        )
    ident = geom.q2_identity()
    power = iso.matrix
    for k in range(1, elem_order):
        if power == ident:
            raise InternalGeometryError("rotation order overestimated")
        power = mat_mul(power, iso.matrix)
    if power != ident:
        raise InternalGeometryError("rotation order underestimated")


# -- feature incidence ---------------------------------------------------------


def axis_feature_incidence(
    p: Polyhedron, axis: RotationAxis | Vec3, tolerance: float = 1e-9
) -> tuple[Feature, Feature]:
    """The two antipodal surface features (face center, vertex, edge
    midpoint) met by the axis line through the centroid."""
    d = axis.direction if isinstance(axis, RotationAxis) else axis
    exact = p.exact
    if not exact and isinstance(d[0], Q2):
        d = tuple(float(x) for x in d)
    c = p.vertex_centroid()

    def on_line(pt: Vec3) -> bool:
        rel = vsub(pt, c)
        cr = geom.vcross(rel, d)
        if exact:
            return geom.is_zero_vec(cr) and not geom.is_zero_vec(rel)
        nrm = math.sqrt(float(vdot(cr, cr)))
        rel_n = math.sqrt(float(vdot(rel, rel)))
        return rel_n > tolerance and nrm <= tolerance * max(1.0, rel_n)

    candidates: list[Feature] = []
    for i, v in enumerate(p.vertices):
        if on_line(v):
            candidates.append(Feature("vertex", i, v))
    for (i, j) in p.edges:
        mid = geom.centroid([p.vertices[i], p.vertices[j]])
        if on_line(mid):
            candidates.append(Feature("edge", (i, j), mid))
    for fi in range(p.n_faces):
        ctr = p.face_center(fi)
        if on_line(ctr):
            candidates.append(Feature("face", fi, ctr))

    pos: list[Feature] = []
    neg: list[Feature] = []
    for f in candidates:
        t = vdot(vsub(f.point, c), d)
        side = t.sign() if exact else (1 if float(t) > 0 else -1)
        (pos if side > 0 else neg).append(f)

    def pick(side: list[Feature], label: str) -> Feature:
        points = {tuple(f.point) for f in side}
        if len(points) != 1:
            raise InternalGeometryError(
                f"axis meets {len(points)} features on its {label} side"
            )
        rank = {"vertex": 0, "edge": 1, "face": 2}
        return min(side, key=lambda f: rank[f.kind])

    return pick(pos, "positive"), pick(neg, "negative")


# -- polar rotations and transitivity -----------------------------------------


_ANGLE_BY_COS_SIN = {geom.exact_cos_sin(d): d for d in range(0, 360, 45)}


def polar_axis_rotations(p: Polyhedron, tolerance: float = 1e-9) -> tuple[int, ...]:
    """Non-identity rotation angles (degrees) about the z axis present in
    the proper group, each verified by exact matrix powers in exact mode."""
    angles = set()
    ident = geom.q2_identity()
    for iso in isometry_group(p, proper_only=True, tolerance=tolerance):
        m = iso.matrix
        if iso.exact:
            ez = (ZERO, ZERO, ONE)
            if mat_vec(m, ez) != ez or m == ident:
                continue
            key = (m[0][0], m[1][0])
            deg = _ANGLE_BY_COS_SIN.get(key)
            if deg is None:
                deg = round(math.degrees(math.atan2(float(m[1][0]), float(m[0][0])))) % 360
            else:
                n = iso.order()
                power = m
                for _ in range(1, n):
                    power = mat_mul(power, m)
                if power != ident:
                    raise InternalGeometryError("polar rotation power check failed")
        else:
            ez_img = mat_vec(m, (0.0, 0.0, 1.0))
            if (
                abs(ez_img[0]) > 1e-6
                or abs(ez_img[1]) > 1e-6
                or abs(ez_img[2] - 1.0) > 1e-6
            ):
                continue
            deg = round(math.degrees(math.atan2(float(m[1][0]), float(m[0][0])))) % 360
            if deg == 0:
                continue
        if deg:
            angles.add(deg)
    return tuple(sorted(angles))


def is_vertex_transitive(
    p: Polyhedron, group: Sequence[Isometry]
) -> tuple[bool, tuple[tuple[int, ...], ...]]:
    """Orbit closure of the vertex set under the group's permutations."""
    n = p.n_vertices
    seen = [False] * n
    orbits: list[tuple[int, ...]] = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for iso in group:
                w = iso.vertex_perm[v]
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        for v in orbit:
            seen[v] = True
        orbits.append(tuple(sorted(orbit)))
    orbits.sort(key=lambda o: (-len(o), o))
    return len(orbits) == 1, tuple(orbits)


def symmetry_report(p: Polyhedron, tolerance: float = 1e-9) -> SymmetryReport:
    """Full symmetry summary: group orders, axes with surface features,
    transitivity and the axis class equation."""
    key = ("symmetry_report", tolerance if not p.exact else None)
    if key in p._cache:
        return p._cache[key]
    full = isometry_group(p, tolerance=tolerance)
    proper = tuple(iso for iso in full if iso.proper)
    axes = rotation_axes(proper)
    approximate = any(not iso.exact for iso in full)
    with_features = []
    for ax in axes:
        feats = axis_feature_incidence(p, ax, tolerance)
        with_features.append(replace(ax, features=feats))
    vt_full, orbits = is_vertex_transitive(p, full)
    vt_proper, _ = is_vertex_transitive(p, proper)
    class_eq = sum(ax.order - 1 for ax in axes) + 1 == len(proper)
    report = SymmetryReport(
        proper_order=len(proper),
        full_order=len(full),
        axes=tuple(with_features),
        vertex_transitive=vt_full,
        vertex_transitive_proper=vt_proper,
        orbit_sizes=tuple(len(o) for o in orbits),
        class_equation_ok=class_eq,
        approximate=approximate,
    )
    p._cache[key] = report
    return report
