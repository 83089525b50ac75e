"""Small vector/matrix helpers shared by the geometry modules.

The arithmetic helpers are generic: they work on triples of ``Q2`` (exact
mode) and on triples of ``float`` (ingested meshes) alike, because both
support ``+ - *``.  Anything that needs an exact zero test is Q2-only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from .qfield import ONE, ZERO, Q2

Vec3 = Tuple  # (x, y, z) of Q2 or float
Mat3 = Tuple  # 3 rows of Vec3


def vadd(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vsub(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vneg(u: Vec3) -> Vec3:
    return (-u[0], -u[1], -u[2])


def vscale(u: Vec3, s) -> Vec3:
    return (u[0] * s, u[1] * s, u[2] * s)


def vdot(u: Vec3, v: Vec3):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def vcross(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def is_zero_vec(u: Vec3) -> bool:
    return all(not c for c in u)


def mat_vec(m: Mat3, v: Vec3) -> Vec3:
    return (vdot(m[0], v), vdot(m[1], v), vdot(m[2], v))


def mat_mul(m: Mat3, n: Mat3) -> Mat3:
    nt = mat_transpose(n)
    return tuple(tuple(vdot(row, col) for col in nt) for row in m)


def mat_transpose(m: Mat3) -> Mat3:
    return tuple(zip(*m))


def mat_det(m: Mat3):
    return vdot(m[0], vcross(m[1], m[2]))


def mat_from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3:
    return mat_transpose((c0, c1, c2))


def q2_identity() -> Mat3:
    return ((ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE))


def mat_inverse_q2(m: Mat3) -> Mat3:
    """Exact inverse of a 3x3 Q2 matrix (adjugate over determinant)."""
    det = mat_det(m)
    if det.is_zero():
        raise ZeroDivisionError("singular matrix")
    inv_det = det.inverse()
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [m[r_][:] for r_ in range(3) if r_ != i]
            minor = [
                [r[0][c] for c in range(3) if c != j],
                [r[1][c] for c in range(3) if c != j],
            ]
            d2 = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0]
            s = ONE if (i + j) % 2 == 0 else -ONE
            cof[i][j] = s * d2
    # adjugate = transpose of the cofactor matrix
    return tuple(tuple(cof[j][i] * inv_det for j in range(3)) for i in range(3))


def kernel_vector_q2(m: Mat3) -> Vec3 | None:
    """One nonzero kernel vector of a rank-2 Q2 matrix, None if invertible.

    Used to extract the fixed line of a rotation from M - I; raises if the
    kernel turns out to be more than one-dimensional.
    """
    rows = [list(r) for r in m]
    pivot_cols: list[int] = []
    r = 0
    for c in range(3):
        pr = next((i for i in range(r, 3) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(3):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
    rank = len(pivot_cols)
    if rank == 3:
        return None
    if rank != 2:
        raise ValueError(f"kernel is {3 - rank}-dimensional, expected a line")
    free = next(c for c in range(3) if c not in pivot_cols)
    v = [ZERO, ZERO, ZERO]
    v[free] = ONE
    for i, pc in enumerate(pivot_cols):
        v[pc] = -rows[i][free]
    return tuple(v)


def canonical_direction_q2(v: Vec3) -> Vec3:
    """Scale so the first nonzero component is +1; identifies v with -v."""
    lead = next((c for c in v if not c.is_zero()), None)
    if lead is None:
        raise ValueError("zero vector has no direction")
    inv = lead.inverse()
    return (v[0] * inv, v[1] * inv, v[2] * inv)


def exact_cos_sin(degrees: int) -> tuple[Q2, Q2]:
    """(cos, sin) of an angle that is a multiple of 45 degrees, in Q2."""
    d = degrees % 360
    if d % 45 != 0:
        raise ValueError(f"no exact Q(sqrt2) trigonometry for {degrees} degrees")
    h = Q2(0, Fraction(1, 2))  # sqrt(2)/2
    table = {
        0: (ONE, ZERO),
        45: (h, h),
        90: (ZERO, ONE),
        135: (-h, h),
        180: (-ONE, ZERO),
        225: (-h, -h),
        270: (ZERO, -ONE),
        315: (h, -h),
    }
    return table[d]


def rotation_about_axis_q2(u: Vec3, cos: Q2, sin: Q2) -> Mat3:
    """Rodrigues rotation matrix about the exact *unit* axis u."""
    if vdot(u, u) != ONE:
        raise ValueError("rotation axis must be an exact unit vector")
    ux, uy, uz = u
    one_c = ONE - cos
    return (
        (
            cos + ux * ux * one_c,
            ux * uy * one_c - uz * sin,
            ux * uz * one_c + uy * sin,
        ),
        (
            uy * ux * one_c + uz * sin,
            cos + uy * uy * one_c,
            uy * uz * one_c - ux * sin,
        ),
        (
            uz * ux * one_c - uy * sin,
            uz * uy * one_c + ux * sin,
            cos + uz * uz * one_c,
        ),
    )


def rotate_about_line_q2(p: Vec3, anchor: Vec3, rot: Mat3) -> Vec3:
    """Apply a rotation matrix about the line through ``anchor``."""
    return vadd(anchor, mat_vec(rot, vsub(p, anchor)))


def centroid(points: Sequence[Vec3]) -> Vec3:
    n = len(points)
    sx = points[0]
    for p in points[1:]:
        sx = vadd(sx, p)
    if isinstance(sx[0], Q2):
        inv = Q2(Fraction(1, n))
        return vscale(sx, inv)
    return (sx[0] / n, sx[1] / n, sx[2] / n)
