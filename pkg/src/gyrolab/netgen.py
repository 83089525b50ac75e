"""Papercraft net generation: three pieces of 9 unit squares each.

One strip of 9 squares folds into the octagonal equatorial belt (8 walls
plus one lap-joint square glued under the first), and two cap pieces
close the poles.  A cap is a plus-pentomino - pole square in the middle,
four side squares on its edges - with a glue tab on the outer edge of
each side square, so the tabs land inside belt squares after folding.
Triangular faces are deliberately absent: they stay open on the model.

Fold targets are interior dihedral angles derived from the built solid,
not hard-coded; every crease of these nets comes out at the square-square
dihedral (135 degrees), whose trigonometry is exact over Q(sqrt2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import belts as belts_mod
from .geom import vdot
from .qfield import Q2
from .solids import Polyhedron, build_rhombicuboctahedron

PAPER_SIZES = {
    "A4": (Fraction(210), Fraction(297)),
    "A3": (Fraction(297), Fraction(420)),
    "A2": (Fraction(420), Fraction(594)),
    "A1": (Fraction(594), Fraction(841)),
    "A0": (Fraction(841), Fraction(1189)),
}
_STANDARD_ORDER = ("A4", "A3", "A2", "A1", "A0")

MARGIN_MM = Fraction(10)
GAP_MM = Fraction(5)

PIECES = ("strip", "cap_north", "cap_south")
_CAP_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class DoesNotFitError(ValueError):
    def __init__(self, paper_name: str, size, suggestion: Optional[str]) -> None:
        w, h = size
        hint = (
            f"; smallest standard sheet that fits: {suggestion}"
            if suggestion
            else "; no standard sheet up to A0 fits"
        )
        super().__init__(
            f"pieces do not fit {paper_name} ({float(w):g}x{float(h):g} mm){hint}"
        )
        self.paper_name = paper_name
        self.suggestion = suggestion


@dataclass(frozen=True)
class NetSquare:
    piece: str
    pos: tuple[int, int]
    role: str  # "face" | "glue" | "pole"
    world_target: Optional[int] = None  # filled by assembly verification


@dataclass(frozen=True)
class Crease:
    piece: str
    a: tuple[int, int]
    b: tuple[int, int]
    fold_target: int  # interior dihedral, degrees


@dataclass(frozen=True)
class Gluing:
    kind: str  # "overlap" | "edge"
    piece: str
    pos: tuple[int, int]
    target_piece: str
    target_pos: Optional[tuple[int, int]]  # None: any belt square, resolved at assembly


@dataclass(frozen=True)
class NetSpec:
    edge_len: Fraction  # mm
    squares: tuple[NetSquare, ...]
    creases: tuple[Crease, ...]
    gluing: tuple[Gluing, ...]
    gyration: int = 0  # assembly parameter; the pieces are gyration-independent

    def squares_of(self, piece: str) -> tuple[NetSquare, ...]:
        return tuple(s for s in self.squares if s.piece == piece)

    def square_at(self, piece: str, pos: tuple[int, int]) -> NetSquare:
        for s in self.squares:
            if s.piece == piece and s.pos == pos:
                return s
        raise KeyError((piece, pos))

    def creases_of(self, piece: str) -> tuple[Crease, ...]:
        return tuple(c for c in self.creases if c.piece == piece)


# -- fold-target derivation ----------------------------------------------------


def _interior_dihedral_degrees(p: Polyhedron, f1: int, f2: int) -> int:
    """Interior dihedral between two adjacent faces, matched against the
    exactly representable angles {0, 45, 90, 135, 180}."""
    n1, n2 = p.face_normal(f1), p.face_normal(f2)
    dot = vdot(n1, n2)
    lhs = dot * dot
    nn = vdot(n1, n1) * vdot(n2, n2)
    from .geom import exact_cos_sin

    for deg in (0, 45, 90, 135, 180):
        cos_d, _ = exact_cos_sin(deg)
        # cos(interior) = -dot/|n1||n2|  =>  compare squares plus the sign
        if lhs == cos_d * cos_d * nn and (-dot).sign() == cos_d.sign():
            return deg
    raise ValueError("dihedral angle has no exact Q(sqrt2) trigonometry")


def _derive_fold_targets() -> dict[str, int]:
    """Measure crease targets on the built solid: belt-to-belt for the
    strip, pole-to-side for the caps, and the angle that lays a tab into
    its host belt square (side-to-belt, since coplanar-with-host means
    equal dihedrals).  Scale-free, so the unit build suffices."""
    p = build_rhombicuboctahedron(2)
    zbelt = next(
        b
        for b in belts_mod.find_belts(p)
        if b.plane_normal == (Q2(0), Q2(0), Q2(1))
    )
    strip_target = _interior_dihedral_degrees(p, zbelt.faces[0], zbelt.faces[1])
    north_pole = zbelt.pole_faces[0]
    assert p.face_center(north_pole)[2].sign() > 0
    pole_face = p.faces[north_pole]
    side = None
    for k in range(4):
        e = tuple(sorted((pole_face[k], pole_face[(k + 1) % 4])))
        g = p.other_face(e, north_pole)
        if len(p.faces[g]) == 4:
            side = (e, g)
            break
    cap_side_target = _interior_dihedral_degrees(p, north_pole, side[1])
    # the tab continues past the side square's outer edge into the belt face
    outer = belts_mod._opposite_edge(p.faces[side[1]], side[0])
    host = p.other_face(outer, side[1])
    tab_target = _interior_dihedral_degrees(p, side[1], host)
    return {"strip": strip_target, "cap_side": cap_side_target, "cap_tab": tab_target}


# -- net construction ------------------------------------------------------------


def generate_nets(edge_len: Fraction | int = 50) -> NetSpec:
    """The three-piece net for a model with square side ``edge_len`` mm."""
    edge = Fraction(edge_len)
    if edge <= 0:
        raise ValueError("edge length must be positive")
    targets = _derive_fold_targets()

    squares: list[NetSquare] = []
    creases: list[Crease] = []
    gluing: list[Gluing] = []

    for i in range(9):
        role = "glue" if i == 8 else "face"
        squares.append(NetSquare("strip", (i, 0), role))
    for i in range(1, 9):
        creases.append(Crease("strip", (i - 1, 0), (i, 0), targets["strip"]))
    gluing.append(Gluing("overlap", "strip", (8, 0), "strip", (0, 0)))

    for piece in ("cap_north", "cap_south"):
        squares.append(NetSquare(piece, (0, 0), "pole"))
        for dx, dy in _CAP_DIRS:
            squares.append(NetSquare(piece, (dx, dy), "face"))
            squares.append(NetSquare(piece, (2 * dx, 2 * dy), "glue"))
            creases.append(Crease(piece, (0, 0), (dx, dy), targets["cap_side"]))
            creases.append(
                Crease(piece, (dx, dy), (2 * dx, 2 * dy), targets["cap_tab"])
            )
            gluing.append(Gluing("overlap", piece, (2 * dx, 2 * dy), "strip", None))
            gluing.append(Gluing("edge", piece, (dx, dy), "strip", None))

    return NetSpec(edge, tuple(squares), tuple(creases), tuple(gluing))


# -- 2D piece geometry (mm, y down) ----------------------------------------------


def piece_bbox(net: NetSpec, piece: str) -> tuple[Fraction, Fraction]:
    L = net.edge_len
    if piece == "strip":
        return 9 * L, L
    return 5 * L, 5 * L


def square_local_rect(net: NetSpec, sq: NetSquare):
    """Piece-local (x, y, w, h) of one net square, origin at the piece
    bounding-box corner."""
    L = net.edge_len
    if sq.piece == "strip":
        return (sq.pos[0] * L, Fraction(0), L, L)
    return ((sq.pos[0] + 2) * L, (sq.pos[1] + 2) * L, L, L)


def _piece_outline_local(net: NetSpec, piece: str) -> list[tuple]:
    """Closed boundary polygon of the piece (unit-edge walk, collinear
    runs merged)."""
    cells = {s.pos for s in net.squares_of(piece)}
    edges: set[tuple] = set()
    for (cx, cy) in cells:
        for seg, neighbor in (
            ((((0, 0)), ((1, 0))), (cx, cy - 1)),
            ((((0, 1)), ((1, 1))), (cx, cy + 1)),
            ((((0, 0)), ((0, 1))), (cx - 1, cy)),
            ((((1, 0)), ((1, 1))), (cx + 1, cy)),
        ):
            if neighbor in cells:
                continue
            (ax, ay), (bx, by) = seg
            edges.add(((cx + ax, cy + ay), (cx + bx, cy + by)))
    adj: dict[tuple, list[tuple]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    loop = [start]
    prev = None
    while True:
        nxts = sorted(n for n in adj[loop[-1]] if n != prev)
        nxt = nxts[0]
        if nxt == start:
            break
        prev = loop[-1]
        loop.append(nxt)
    merged: list[tuple] = []
    m = len(loop)
    for k in range(m):
        a, b, c = loop[k - 1], loop[k], loop[(k + 1) % m]
        if (b[0] - a[0]) * (c[1] - b[1]) != (b[1] - a[1]) * (c[0] - b[0]):
            merged.append(b)
    L = net.edge_len
    off = Fraction(2) if piece != "strip" else Fraction(0)
    return [((x + off) * L, (y + off) * L) for (x, y) in merged]


# -- packing ----------------------------------------------------------------------


def _compositions3():
    return ([3], [1, 2], [2, 1], [1, 1, 1])


def _pack(sizes, avail_w: Fraction, avail_h: Fraction):
    """Deterministic shelf packing of up to three boxes with optional
    90-degree rotation; returns (x, y, rotated) per box or None."""
    n = len(sizes)
    for axis in ("columns", "rows"):
        for split in _compositions3():
            for mask in range(2 ** n):
                dims = [
                    (sizes[i][1], sizes[i][0]) if (mask >> i) & 1 else sizes[i]
                    for i in range(n)
                ]
                groups = []
                k = 0
                for g in split:
                    groups.append(list(range(k, k + g)))
                    k += g
                if axis == "columns":
                    widths = [max(dims[i][0] for i in g) for g in groups]
                    heights = [
                        sum(dims[i][1] for i in g) + GAP_MM * (len(g) - 1)
                        for g in groups
                    ]
                    total_w = sum(widths) + GAP_MM * (len(groups) - 1)
                    if total_w > avail_w or any(h > avail_h for h in heights):
                        continue
                    out = [None] * n
                    x = Fraction(0)
                    for gi, g in enumerate(groups):
                        y = Fraction(0)
                        for i in g:
                            out[i] = (x, y, bool((mask >> i) & 1))
                            y += dims[i][1] + GAP_MM
                        x += widths[gi] + GAP_MM
                    return out
                else:
                    heights = [max(dims[i][1] for i in g) for g in groups]
                    widths = [
                        sum(dims[i][0] for i in g) + GAP_MM * (len(g) - 1)
                        for g in groups
                    ]
                    total_h = sum(heights) + GAP_MM * (len(groups) - 1)
                    if total_h > avail_h or any(w > avail_w for w in widths):
                        continue
                    out = [None] * n
                    y = Fraction(0)
                    for gi, g in enumerate(groups):
                        x = Fraction(0)
                        for i in g:
                            out[i] = (x, y, bool((mask >> i) & 1))
                            x += dims[i][0] + GAP_MM
                        y += heights[gi] + GAP_MM
                    return out
    return None


def resolve_paper(paper) -> tuple[str, tuple[Fraction, Fraction]]:
    if isinstance(paper, str):
        name = paper.strip()
        if name.upper() in PAPER_SIZES:
            return name.upper(), PAPER_SIZES[name.upper()]
        if "x" in name.lower():
            w_s, h_s = name.lower().split("x", 1)
            w, h = Fraction(w_s), Fraction(h_s)
            if w <= 0 or h <= 0:
                raise ValueError(f"bad paper size {paper!r}")
            return f"{float(w):g}x{float(h):g}", (w, h)
        raise ValueError(
            f"unknown paper {paper!r}; use A2, A3, A4 or WIDTHxHEIGHT in mm"
        )
    w, h = paper
    return f"{float(w):g}x{float(h):g}", (Fraction(w), Fraction(h))


def plan_layout(net: NetSpec, paper="A2"):
    """Placements (piece -> (x, y, rotated)) on the sheet, or a
    DoesNotFitError naming the smallest standard sheet that would fit."""
    name, (pw, ph) = resolve_paper(paper)
    sizes = [piece_bbox(net, piece) for piece in PIECES]
    placed = _pack(sizes, pw - 2 * MARGIN_MM, ph - 2 * MARGIN_MM)
    if placed is None:
        suggestion = None
        for cand in _STANDARD_ORDER:
            cw, ch = PAPER_SIZES[cand]
            if _pack(sizes, cw - 2 * MARGIN_MM, ch - 2 * MARGIN_MM) is not None:
                suggestion = cand
                break
        raise DoesNotFitError(name, (pw, ph), suggestion)
    return name, (pw, ph), {
        piece: (MARGIN_MM + x, MARGIN_MM + y, rot)
        for piece, (x, y, rot) in zip(PIECES, placed)
    }


# -- SVG ---------------------------------------------------------------------------


def _fmt(v) -> str:
    return f"{float(v):.4f}".rstrip("0").rstrip(".")


def _map_point(origin, rot: bool, bbox, x, y):
    ox, oy = origin
    w, h = bbox
    if rot:  # 90 degrees clockwise: piece bbox becomes h x w
        return ox + (h - y), oy + x
    return ox + x, oy + y


def _map_rect(origin, rot, bbox, rect):
    x, y, w, h = rect
    if rot:
        x0, y0 = _map_point(origin, rot, bbox, x, y + h)
        return x0, y0, h, w
    x0, y0 = _map_point(origin, rot, bbox, x, y)
    return x0, y0, w, h


def render_svg(net: NetSpec, paper="A2") -> str:
    """One printable SVG: solid 0.5 mm cut lines, dashed 0.35 mm creases,
    grey glue squares, 6 mm pole crosses; millimetre units, document size
    equal to the sheet.  Byte-identical across runs for equal inputs."""
    name, (pw, ph), layout = plan_layout(net, paper)
    L = net.edge_len
    body: list[str] = []

    body.append("  <g class=\"squares\">")
    for piece in PIECES:
        origin_x, origin_y, rot = layout[piece]
        bbox = piece_bbox(net, piece)
        for sq in sorted(net.squares_of(piece), key=lambda s: s.pos):
            rx, ry, rw, rh = _map_rect(
                (origin_x, origin_y), rot, bbox, square_local_rect(net, sq)
            )
            fill = "#cccccc" if sq.role == "glue" else "none"
            body.append(
                f'    <rect class="square {sq.role}" x="{_fmt(rx)}" y="{_fmt(ry)}"'
                f' width="{_fmt(rw)}" height="{_fmt(rh)}" fill="{fill}" stroke="none"/>'
            )
    body.append("  </g>")

    body.append("  <g class=\"creases\" stroke=\"#000000\" stroke-width=\"0.35\""
                " stroke-dasharray=\"2 1\">")
    for piece in PIECES:
        origin_x, origin_y, rot = layout[piece]
        bbox = piece_bbox(net, piece)
        for cr in sorted(net.creases_of(piece), key=lambda c: (c.a, c.b)):
            ra = square_local_rect(net, net.square_at(piece, cr.a))
            rb = square_local_rect(net, net.square_at(piece, cr.b))
            # shared edge of the two grid squares
            if ra[0] == rb[0]:  # vertical neighbors: horizontal crease
                y = max(ra[1], rb[1])
                p1 = (ra[0], y)
                p2 = (ra[0] + L, y)
            else:
                x = max(ra[0], rb[0])
                p1 = (x, ra[1])
                p2 = (x, ra[1] + L)
            a = _map_point((origin_x, origin_y), rot, bbox, *p1)
            b = _map_point((origin_x, origin_y), rot, bbox, *p2)
            body.append(
                f'    <line class="crease" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}"'
                f' x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" data-fold="{cr.fold_target}"/>'
            )
    body.append("  </g>")

    body.append(
        "  <g class=\"cuts\" stroke=\"#000000\" stroke-width=\"0.5\" fill=\"none\">"
    )
    for piece in PIECES:
        origin_x, origin_y, rot = layout[piece]
        bbox = piece_bbox(net, piece)
        pts = [
            _map_point((origin_x, origin_y), rot, bbox, x, y)
            for (x, y) in _piece_outline_local(net, piece)
        ]
        d = "M " + " L ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + " Z"
        body.append(f'    <path class="cut" d="{d}"/>')
    body.append("  </g>")

    cross_half = Fraction(3)  # two 6 mm strokes
    for piece in PIECES:
        origin_x, origin_y, rot = layout[piece]
        bbox = piece_bbox(net, piece)
        for sq in net.squares_of(piece):
            if sq.role != "pole":
                continue
            rx, ry, rw, rh = square_local_rect(net, sq)
            cx, cy = rx + rw / 2, ry + rh / 2
            c = _map_point((origin_x, origin_y), rot, bbox, cx, cy)
            k = float(cross_half) / math.sqrt(2.0)
            body.append("  <g class=\"pole-cross\" stroke=\"#000000\""
                        " stroke-width=\"0.5\">")
            body.append(
                f'    <line x1="{_fmt(c[0] - k)}" y1="{_fmt(c[1] - k)}"'
                f' x2="{_fmt(c[0] + k)}" y2="{_fmt(c[1] + k)}"/>'
            )
            body.append(
                f'    <line x1="{_fmt(c[0] - k)}" y1="{_fmt(c[1] + k)}"'
                f' x2="{_fmt(c[0] + k)}" y2="{_fmt(c[1] - k)}"/>'
            )
            body.append("  </g>")

    desc_lines = [
        "gyrolab 0.1.0 papercraft net",
        f"square edge {float(L):g} mm; 3 pieces, 27 squares, 9 glue squares",
        "strip: 9 squares (8 belt walls + 1 lap-joint square glued under square 1)",
        "caps: pole square + 4 side squares + 4 glue tabs on the side squares'"
        " outer edges (layout interpretation: tabs fold inside the belt)",
        "assembly: caps aligned (gyration 0) -> rhombicuboctahedron;"
        " one cap turned 45 degrees -> pseudo-rhombicuboctahedron",
        "triangular faces intentionally open",
    ]
    desc = "\n".join(desc_lines)
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(pw)}mm"'
        f' height="{_fmt(ph)}mm" viewBox="0 0 {_fmt(pw)} {_fmt(ph)}">\n'
        f"  <title>gyrolab net ({name})</title>\n"
        f"  <desc>{desc}</desc>\n"
    )
    return head + "\n".join(body) + "\n</svg>\n"
