"""gyrolab: exact-arithmetic toolkit for the rhombicuboctahedron and its
gyrate twin (the pseudo-rhombicuboctahedron).

Builds both solids over Q(sqrt2), detects their rotation axes and
equatorial belts, decides vertex transitivity, generates the three-piece
papercraft nets as SVG, and verifies by rigid fold simulation that the
nets assemble into either solid depending on a 45-degree cap gyration.
"""

from .qfield import Q2, SQRT2
from .solids import (
    Polyhedron,
    build_pseudo_rhombicuboctahedron,
    build_rhombicuboctahedron,
    face_census,
    validate,
    vertex_figure,
)

__version__ = "0.1.0"

__all__ = [
    "Q2",
    "SQRT2",
    "Polyhedron",
    "build_rhombicuboctahedron",
    "build_pseudo_rhombicuboctahedron",
    "face_census",
    "validate",
    "vertex_figure",
    "__version__",
]
