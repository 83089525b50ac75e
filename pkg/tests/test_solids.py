import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyrolab.geom import vdot, vsub
from gyrolab.qfield import ONE, SQRT2, Q2, parse
from gyrolab.solids import (
    OffParseError,
    Polyhedron,
    build_pseudo_rhombicuboctahedron,
    build_rhombicuboctahedron,
    face_census,
    read_off,
    to_json,
    validate,
    vertex_figure,
    write_off,
)

def brute_force_vertex_set(edge) -> set:
    """Independent oracle: distinct coordinate permutations of
    (+-s, +-s, +-(1+sqrt2)s)."""
    s = Q2.coerce(edge) * Q2(Fraction(1, 2))
    t = (ONE + SQRT2) * s
    out = set()
    for signs in itertools.product((1, -1), repeat=3):
        base = (signs[0] * s, signs[1] * s, signs[2] * t)
        for perm in itertools.permutations(range(3)):
            out.add(tuple(base[perm.index(k)] for k in range(3)))
    return out


def test_vertex_count_against_brute_force(rco):
    expected = brute_force_vertex_set(2)
    assert set(rco.vertices) == expected
    assert rco.n_vertices == len(expected) == 24


def test_edge_count_against_min_distance_pairs(rco):
    # independent oracle: for this solid, vertex pairs at distance == edge
    # are exactly the edges (the next-smallest gap is the square diagonal)
    L2 = Q2(4)
    pairs = {
        (i, j)
        for i in range(24)
        for j in range(i + 1, 24)
        if vdot(vsub(rco.vertices[i], rco.vertices[j]),
                vsub(rco.vertices[i], rco.vertices[j])) == L2
    }
    assert len(pairs) == 48
    assert set(rco.edges) == pairs
    assert rco.n_vertices - rco.n_edges + rco.n_faces == 2


def test_face_census_both_solids(rco, pseudo):
    for p in (rco, pseudo):
        c = face_census(p)
        assert p.n_faces == 26
        assert (c.triangles, c.quads, c.other) == (8, 18, 0)


def test_every_edge_has_exact_build_length(rco):
    for (i, j) in rco.edges:
        d = vsub(rco.vertices[i], rco.vertices[j])
        assert vdot(d, d) == Q2(4)


def test_pseudo_counts(pseudo):
    assert (pseudo.n_vertices, pseudo.n_edges, pseudo.n_faces) == (24, 48, 26)
    assert pseudo.euler_characteristic == 2


def test_pseudo_vertex_set_differs_in_exactly_four_points(rco, pseudo):
    assert len(set(pseudo.vertices) - set(rco.vertices)) == 4
    assert len(set(rco.vertices) - set(pseudo.vertices)) == 4


def test_canonical_pose(rco, pseudo):
    t = ONE + SQRT2  # edge 2 -> s = 1
    for p in (rco, pseudo):
        assert all(c.is_zero() for c in p.vertex_centroid())
        polar_centers = {
            tuple(p.face_center(fi))
            for fi in range(p.n_faces)
            if len(p.faces[fi]) == 4
        }
        assert (Q2(0), Q2(0), t) in polar_centers
        assert (Q2(0), Q2(0), -t) in polar_centers


def test_builders_pass_validation(rco, pseudo, cube):
    for p in (rco, pseudo, cube):
        report = validate(p)
        assert report.ok, [c for c in report.checks if not c.passed]


@pytest.mark.parametrize("edge", [Fraction(5), Fraction(7, 3), Q2(1, 1)])
def test_scaling_changes_no_combinatorics(edge, rco):
    p = build_rhombicuboctahedron(edge)
    scale = Q2.coerce(edge) * Q2(Fraction(1, 2))
    assert p.vertices == tuple(
        tuple(c * scale for c in v) for v in rco.vertices
    )
    assert p.faces == rco.faces
    assert face_census(p) == face_census(rco)
    assert validate(p).ok


def test_positive_edge_required():
    with pytest.raises(ValueError):
        build_rhombicuboctahedron(0)
    with pytest.raises(ValueError):
        build_pseudo_rhombicuboctahedron(Fraction(-1, 2))


def test_vertex_figures_all_3444(rco, pseudo):
    for p in (rco, pseudo):
        figures = {vertex_figure(p, v) for v in range(p.n_vertices)}
        assert figures == {(3, 4, 4, 4)}


def test_vertex_figure_cube(cube):
    assert vertex_figure(cube, 0) == (4, 4, 4)
    with pytest.raises(KeyError):
        vertex_figure(cube, 99)


def test_cube_fixture_passes_validation(cube_off_text):
    p = read_off(cube_off_text)
    assert not p.exact
    assert validate(p, 1e-9).ok


def test_open_edge_detection(cube):
    broken = Polyhedron(cube.vertices, cube.faces[:-1], exact=True)
    report = validate(broken)
    assert not report.ok
    assert not report.passed("manifold")
    assert len(report.open_edges) == 4


def test_dangling_index_reported_not_raised(cube):
    bad = Polyhedron(cube.vertices, list(cube.faces) + [(0, 1, 99)], exact=True)
    report = validate(bad)
    assert not report.ok
    assert not report.passed("indices")


def test_flipped_face_breaks_winding(cube):
    faces = list(cube.faces)
    faces[0] = tuple(reversed(faces[0]))
    report = validate(Polyhedron(cube.vertices, faces, exact=True))
    assert not report.passed("winding")


def test_off_round_trip(rco):
    p = read_off(write_off(rco))
    assert (p.n_vertices, p.n_faces, p.n_edges) == (24, 26, 48)
    assert p.faces == rco.faces
    for u, v in zip(p.vertices, rco.vertices):
        assert max(abs(a - float(b)) for a, b in zip(u, v)) < 1e-12
    assert validate(p, 1e-9).ok


def test_off_counts_line_matches_contents(rco):
    header = write_off(rco).splitlines()[1]
    assert header == "24 26 48"


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("FOO\n3 1 0\n", 1),
        ("OFF\n1 2\n", 2),
        ("OFF\n1 0 0\n0.0 0.0\n", 3),
        ("OFF\n1 1 0\n0 0 0\n4 0 0 0\n", 4),
    ],
)
def test_off_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(OffParseError) as exc:
        read_off(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_off_skips_comments_and_blank_lines(cube_off_text):
    text = "# comment\n\n" + cube_off_text.replace("OFF\n", "OFF\n# inner\n\n")
    assert read_off(text).n_faces == 6


def test_json_dump_round_trips_exactly(pseudo):
    doc = json.loads(to_json(pseudo, "pseudo"))
    assert doc["schema"] == "gyrolab/1"
    verts = [tuple(parse(c) for c in v) for v in doc["vertices"]]
    assert tuple(verts) == pseudo.vertices
    assert [tuple(f) for f in doc["faces"]] == list(pseudo.faces)


def test_json_dump_requires_exact_mesh(rco):
    with pytest.raises(ValueError):
        to_json(read_off(write_off(rco)))


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value="1/10", max_value=20, max_denominator=40))
def test_off_floats_have_full_precision(edge):
    base = build_rhombicuboctahedron(2)
    scale = Q2(edge) * Q2(Fraction(1, 2))
    p = Polyhedron(
        [tuple(c * scale for c in v) for v in base.vertices], base.faces, exact=True
    )
    q = read_off(write_off(p))
    for u, v in zip(q.vertices, p.vertices):
        assert max(abs(a - float(b)) for a, b in zip(u, v)) <= 1e-13 * float(edge)
