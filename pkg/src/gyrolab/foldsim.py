"""Rigid fold verification: assemble the nets in exact arithmetic.

Each piece folds along a spanning tree of creases (a path for the strip,
a star for the caps); a crease rotates its entire subtree about the
crease line by 180 degrees minus the target dihedral.  All crease lines
have exact unit directions and all targets are multiples of 45 degrees,
so every placed corner stays in Q(sqrt2)^3 and closure is checked, never
solved: square 9 must land exactly on square 1, every glue tab must lie
inside a belt square, and the assembled face squares must reproduce the
target solid's faces as exact point sets.

Pose convention: strip square 1 starts on the belt face whose outward
normal is +x, in the builders' canonical pose; the north cap is the one
rotated by the gyration parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import geom
from .geom import Mat3, Vec3, mat_mul, mat_vec, vadd, vdot, vsub
from .netgen import _CAP_DIRS, NetSpec
from .qfield import ONE, ZERO, Q2
from .solids import build_pseudo_rhombicuboctahedron, build_rhombicuboctahedron


@dataclass(frozen=True)
class PlacedSquare:
    piece: str
    pos: tuple[int, int]
    role: str
    corners: tuple[Vec3, Vec3, Vec3, Vec3]  # cyclic

    def corner_set(self) -> frozenset:
        return frozenset(self.corners)


@dataclass(frozen=True)
class ClosureCheck:
    name: str
    piece: str
    pos: tuple[int, int]
    passed: bool
    detail: str = ""
    witness: Optional[tuple[Vec3, ...]] = None
    deviation_sq: Optional[Q2] = None  # exact squared distance witness

    @property
    def distance(self) -> float:
        if self.deviation_sq is None:
            return 0.0
        return math.sqrt(float(self.deviation_sq))


@dataclass(frozen=True)
class ClosureReport:
    checks: tuple[ClosureCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[ClosureCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


@dataclass
class AssemblyResult:
    net: NetSpec
    gyration: int
    target_name: str
    squares: dict
    matched: bool
    correspondence: dict
    closure: ClosureReport
    closure_residual: Q2

    def placed(self) -> list[PlacedSquare]:
        return [sq for piece in self.squares.values() for sq in piece]

    def face_squares(self) -> list[PlacedSquare]:
        return [sq for sq in self.placed() if sq.role in ("face", "pole")]

    def to_json_dict(self) -> dict:
        return {
            "schema": "gyrolab/1",
            "kind": "assembly",
            "gyration": self.gyration,
            "target": self.target_name,
            "matched": self.matched,
            "closure_ok": self.closure.ok,
            "closure_residual": str(self.closure_residual),
            "squares": {
                piece: [
                    {
                        "pos": list(sq.pos),
                        "role": sq.role,
                        "corners": [[str(c) for c in pt] for pt in sq.corners],
                    }
                    for sq in sqs
                ]
                for piece, sqs in self.squares.items()
            },
            "correspondence": {
                f"{piece}:{pos[0]},{pos[1]}": face
                for (piece, pos), face in sorted(self.correspondence.items())
            },
            "closure": [
                {
                    "check": c.name,
                    "piece": c.piece,
                    "pos": list(c.pos),
                    "passed": c.passed,
                    "detail": c.detail,
                    "distance": c.distance,
                }
                for c in self.closure.checks
            ],
        }

    def to_off(self) -> str:
        """Floating OFF of the assembled face squares, for viewers."""
        verts: list[Vec3] = []
        index: dict[Vec3, int] = {}
        faces = []
        for sq in self.face_squares():
            ids = []
            for c in sq.corners:
                if c not in index:
                    index[c] = len(verts)
                    verts.append(c)
                ids.append(index[c])
            faces.append(ids)
        lines = ["OFF", f"{len(verts)} {len(faces)} 0"]
        for v in verts:
            lines.append(" ".join(f"{float(c):.17g}" for c in v))
        for f in faces:
            lines.append(" ".join(str(x) for x in (len(f), *f)))
        return "\n".join(lines) + "\n"


# -- affine transforms over Q2 ---------------------------------------------------


@dataclass(frozen=True)
class _Affine:
    m: Mat3
    b: Vec3

    def apply(self, p: Vec3) -> Vec3:
        return vadd(mat_vec(self.m, p), self.b)

    def then_inner(self, inner: "_Affine") -> "_Affine":
        # self(inner(x))
        return _Affine(mat_mul(self.m, inner.m), vadd(mat_vec(self.m, inner.b), self.b))


def _identity_affine() -> _Affine:
    return _Affine(geom.q2_identity(), (ZERO, ZERO, ZERO))


def _rotation_about_line(anchor: Vec3, axis_unit: Vec3, degrees: int) -> _Affine:
    cos, sin = geom.exact_cos_sin(degrees)
    m = geom.rotation_about_axis_q2(axis_unit, cos, sin)
    return _Affine(m, vsub(anchor, mat_vec(m, anchor)))


def _fold_rotation_degrees(dihedral_target: int) -> int:
    if dihedral_target % 45 != 0 or not (0 <= dihedral_target <= 180):
        raise ValueError(
            f"crease target {dihedral_target} has no exact Q(sqrt2) trigonometry"
        )
    return 180 - dihedral_target


# -- folding ---------------------------------------------------------------------


def _q(x: Fraction) -> Q2:
    return Q2(x)


def _strip_flat_point(L: Q2, s: Q2, t: Q2, u: Q2, v: Q2) -> Vec3:
    # strip lies in the plane x = t; u runs along -y, v along -z
    return (t, s - u, s - v)


def _fold_strip(net: NetSpec, L: Q2, s: Q2, t: Q2) -> list[PlacedSquare]:
    squares = sorted(net.squares_of("strip"), key=lambda sq: sq.pos)
    if [sq.pos for sq in squares] != [(i, 0) for i in range(9)]:
        raise ValueError("inconsistent gluing instruction: unexpected strip layout")
    creases = {}
    for c in net.creases_of("strip"):
        i = max(c.a[0], c.b[0])
        if {c.a, c.b} != {(i - 1, 0), (i, 0)}:
            raise ValueError("inconsistent gluing instruction: bad strip crease")
        creases[i] = c.fold_target
    if sorted(creases) != list(range(1, 9)):
        raise ValueError("inconsistent gluing instruction: strip creases missing")

    axis = (ZERO, ZERO, -ONE)  # outward normal (+x) crossed with walk direction (-y)
    out: list[PlacedSquare] = []
    transform = _identity_affine()
    for i, sq in enumerate(squares):
        if i > 0:
            rho = _fold_rotation_degrees(creases[i])
            anchor = _strip_flat_point(L, s, t, Q2(i) * L, ZERO)
            transform = transform.then_inner(
                _rotation_about_line(anchor, axis, rho)
            )
        u0, u1 = Q2(i) * L, Q2(i + 1) * L
        flat = (
            _strip_flat_point(L, s, t, u0, ZERO),
            _strip_flat_point(L, s, t, u1, ZERO),
            _strip_flat_point(L, s, t, u1, L),
            _strip_flat_point(L, s, t, u0, L),
        )
        out.append(
            PlacedSquare("strip", sq.pos, sq.role, tuple(transform.apply(p) for p in flat))
        )
    return out


def _fold_cap(net: NetSpec, piece: str, L: Q2, s: Q2, t: Q2,
              gyration: int) -> list[PlacedSquare]:
    north = piece == "cap_north"
    z_pole = t if north else -t
    n_out = (ZERO, ZERO, ONE if north else -ONE)
    half = L * Q2(Fraction(1, 2))

    def flat_point(u: Q2, v: Q2) -> Vec3:
        return (u, v, z_pole)

    targets: dict[tuple, int] = {}
    for c in net.creases_of(piece):
        targets[(c.a, c.b)] = c.fold_target
        targets[(c.b, c.a)] = c.fold_target

    gyr = (
        _rotation_about_line((ZERO, ZERO, ZERO), (ZERO, ZERO, ONE), gyration)
        if north and gyration % 360 != 0
        else _identity_affine()
    )

    out: list[PlacedSquare] = []
    pole_sq = net.square_at(piece, (0, 0))
    corners_flat = (
        flat_point(-half, -half),
        flat_point(half, -half),
        flat_point(half, half),
        flat_point(-half, half),
    )
    out.append(
        PlacedSquare(piece, (0, 0), pole_sq.role,
                     tuple(gyr.apply(p) for p in corners_flat))
    )

    for dx, dy in _CAP_DIRS:
        w = (Q2(dx), Q2(dy), ZERO)
        axis = geom.vcross(n_out, w)
        try:
            t_side = targets[((0, 0), (dx, dy))]
            t_tab = targets[((dx, dy), (2 * dx, 2 * dy))]
        except KeyError:
            raise ValueError(
                f"inconsistent gluing instruction: {piece} branch {(dx, dy)}"
                " lacks creases"
            ) from None
        r1 = _rotation_about_line(
            (Q2(dx) * half, Q2(dy) * half, z_pole), axis,
            _fold_rotation_degrees(t_side),
        )
        r2 = _rotation_about_line(
            (Q2(3 * dx) * half, Q2(3 * dy) * half, z_pole), axis,
            _fold_rotation_degrees(t_tab),
        )
        for pos, tr in (((dx, dy), r1), ((2 * dx, 2 * dy), r1.then_inner(r2))):
            sq = net.square_at(piece, pos)
            cx, cy = Q2(pos[0]) * L, Q2(pos[1]) * L
            flat = (
                flat_point(cx - half, cy - half),
                flat_point(cx + half, cy - half),
                flat_point(cx + half, cy + half),
                flat_point(cx - half, cy + half),
            )
            out.append(
                PlacedSquare(piece, pos, sq.role,
                             tuple(gyr.apply(tr.apply(p)) for p in flat))
            )
    return out


def _check_square_shape(sq: PlacedSquare, L: Q2) -> None:
    L2 = L * L
    c = sq.corners
    for k in range(4):
        side = vsub(c[(k + 1) % 4], c[k])
        if vdot(side, side) != L2:
            raise AssertionError(f"placed square {sq.piece}{sq.pos} has a wrong side")
    for a, b in ((0, 2), (1, 3)):
        diag = vsub(c[b], c[a])
        if vdot(diag, diag) != L2 + L2:
            raise AssertionError(f"placed square {sq.piece}{sq.pos} has a wrong diagonal")


def fold(net: NetSpec, gyration: int = 0) -> AssemblyResult:
    """Fold the three pieces and match them against the target solid.

    ``gyration`` (degrees, any multiple of 45) rotates the north cap
    about the polar axis before gluing: multiples of 90 reproduce the
    rhombicuboctahedron, odd multiples of 45 the pseudo twin.
    """
    if gyration % 45 != 0:
        raise ValueError(
            f"gyration {gyration} has no exact Q(sqrt2) trigonometry"
        )
    L = _q(net.edge_len)
    s = L * Q2(Fraction(1, 2))
    t = (ONE + Q2(0, 1)) * s

    placed = {
        "strip": _fold_strip(net, L, s, t),
        "cap_north": _fold_cap(net, "cap_north", L, s, t, gyration % 360),
        "cap_south": _fold_cap(net, "cap_south", L, s, t, 0),
    }
    for sqs in placed.values():
        for sq in sqs:
            _check_square_shape(sq, L)

    if gyration % 90 == 0:
        target = build_rhombicuboctahedron(net.edge_len)
        target_name = "rhombicuboctahedron"
    else:
        target = build_pseudo_rhombicuboctahedron(net.edge_len)
        target_name = "pseudo-rhombicuboctahedron"

    face_sets = {frozenset(target.vertices[i] for i in f): fi
                 for fi, f in enumerate(target.faces)}
    correspondence = {}
    matched = True
    corner_union = set()
    for piece, sqs in placed.items():
        for sq in sqs:
            if sq.role not in ("face", "pole"):
                continue
            corner_union.update(sq.corners)
            fi = face_sets.get(sq.corner_set())
            if fi is None:
                matched = False
            else:
                correspondence[(piece, sq.pos)] = fi
    if corner_union != set(target.vertices):
        matched = False

    result = AssemblyResult(
        net=net,
        gyration=gyration,
        target_name=target_name,
        squares=placed,
        matched=matched,
        correspondence=correspondence,
        closure=ClosureReport(()),
        closure_residual=Q2(0),
    )
    report = check_closure(result)
    result.closure = report
    residual = Q2(0)
    for c in report.checks:
        if not c.passed and c.deviation_sq is not None and c.deviation_sq > residual:
            residual = c.deviation_sq
    result.closure_residual = residual
    return result


# -- closure checks ----------------------------------------------------------------


def _sq_distance(p: Vec3, q: Vec3) -> Q2:
    d = vsub(p, q)
    return vdot(d, d)


def _host_deviation(host: PlacedSquare, tab: PlacedSquare) -> Q2:
    """Exact squared distance witnessing how far the tab is from lying
    flat inside the host square: zero iff coplanar and contained."""
    c = host.corners
    normal = geom.vcross(vsub(c[1], c[0]), vsub(c[3], c[0]))
    nn = vdot(normal, normal)
    worst = Q2(0)
    for p in tab.corners:
        off = vdot(normal, vsub(p, c[0]))
        plane_sq = off * off / nn
        if plane_sq > worst:
            worst = plane_sq
        signs = []
        excess = Q2(0)
        for k in range(4):
            edge = vsub(c[(k + 1) % 4], c[k])
            cr = vdot(geom.vcross(edge, vsub(p, c[k])), normal)
            signs.append(cr.sign())
        if not (all(s >= 0 for s in signs) or all(s <= 0 for s in signs)):
            # in-plane violation: squared distance to the nearest edge line
            for k in range(4):
                edge = vsub(c[(k + 1) % 4], c[k])
                cr = vdot(geom.vcross(edge, vsub(p, c[k])), normal)
                d_sq = cr * cr / (vdot(edge, edge) * nn)
                excess = max(excess, d_sq)
            worst = max(worst, excess)
    return worst


def check_closure(result: AssemblyResult) -> ClosureReport:
    """Verify the gluing instructions on the folded result.

    (a) the strip's glue square exactly overlaps its first square;
    (b) every cap glue tab is coplanar with and contained in a belt
        square; (c) every cap side square's outer edge coincides with an
        edge of a belt square (its top edge for the north cap, bottom for
        the south).  Failures become report entries with exact witness
        points, never exceptions.
    """
    net = result.net
    strip = {sq.pos: sq for sq in result.squares["strip"]}
    belt_squares = [strip[(i, 0)] for i in range(8)]
    caps = {piece: {sq.pos: sq for sq in result.squares[piece]}
            for piece in ("cap_north", "cap_south")}
    checks: list[ClosureCheck] = []

    for glue in net.gluing:
        if glue.kind == "overlap" and glue.piece == "strip":
            a = strip.get(glue.pos)
            b = strip.get(glue.target_pos)
            if a is None or b is None:
                raise ValueError("inconsistent gluing instruction: missing strip square")
            if a.corner_set() == b.corner_set():
                checks.append(
                    ClosureCheck("lap_joint", glue.piece, glue.pos, True,
                                 "glue square exactly overlaps the first square")
                )
            else:
                worst_pt, worst_sq = None, None
                for p in a.corners:
                    best = min(_sq_distance(p, q) for q in b.corners)
                    if worst_sq is None or best > worst_sq:
                        worst_pt, worst_sq = p, best
                checks.append(
                    ClosureCheck(
                        "lap_joint", glue.piece, glue.pos, False,
                        "strip does not close into the octagonal belt",
                        witness=(worst_pt,), deviation_sq=worst_sq,
                    )
                )
        elif glue.kind == "overlap":
            tab = caps[glue.piece].get(glue.pos)
            if tab is None:
                raise ValueError("inconsistent gluing instruction: missing tab")
            best_host, best_dev = None, None
            for host in belt_squares:
                dev = _host_deviation(host, tab)
                if best_dev is None or dev < best_dev:
                    best_host, best_dev = host, dev
                if dev.is_zero():
                    break
            if best_dev is not None and best_dev.is_zero():
                checks.append(
                    ClosureCheck(
                        "tab_in_belt_square", glue.piece, glue.pos, True,
                        f"tab coplanar with and inside strip square {best_host.pos[0] + 1}",
                    )
                )
            else:
                checks.append(
                    ClosureCheck(
                        "tab_in_belt_square", glue.piece, glue.pos, False,
                        "glue tab lies flat in no belt square",
                        witness=(tab.corners[0],), deviation_sq=best_dev,
                    )
                )
        elif glue.kind == "edge":
            side = caps[glue.piece].get(glue.pos)
            tab = caps[glue.piece].get((2 * glue.pos[0], 2 * glue.pos[1]))
            if side is None or tab is None:
                raise ValueError("inconsistent gluing instruction: missing cap square")
            shared = side.corner_set() & tab.corner_set()
            hit = None
            best_dev = None
            if len(shared) == 2:
                edge = frozenset(shared)
                pts = tuple(shared)
                for host in belt_squares:
                    c = host.corners
                    for k in range(4):
                        host_edge = (c[k], c[(k + 1) % 4])
                        if frozenset(host_edge) == edge:
                            hit = host
                            break
                        dev = min(
                            max(_sq_distance(pts[0], host_edge[0]),
                                _sq_distance(pts[1], host_edge[1])),
                            max(_sq_distance(pts[0], host_edge[1]),
                                _sq_distance(pts[1], host_edge[0])),
                        )
                        if best_dev is None or dev < best_dev:
                            best_dev = dev
                    if hit:
                        break
            checks.append(
                ClosureCheck(
                    "cap_edge_on_belt", glue.piece, glue.pos, hit is not None,
                    f"outer edge coincides with an edge of strip square {hit.pos[0] + 1}"
                    if hit else "outer edge matches no belt square edge",
                    witness=None if hit else tuple(sorted(side.corner_set() & tab.corner_set() or side.corner_set())[:2]),
                    deviation_sq=None if hit else best_dev,
                )
            )
        else:
            raise ValueError(f"inconsistent gluing instruction: unknown kind {glue.kind!r}")
    return ClosureReport(tuple(checks))
