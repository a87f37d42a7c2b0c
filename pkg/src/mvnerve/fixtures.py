"""The in-repo fixture corpus.

Every complex here is a standard small triangulation; the covers are the
ones used by the acceptance checks. Set ids of the hand-made covers are
strings so they round-trip through the cover JSON format unchanged.
"""

from __future__ import annotations

from .complexes import SimplicialComplex, close_downward
from .covers import StarCover, star_cover


def point() -> SimplicialComplex:
    return close_downward([[0]], [0])


def triangle_boundary() -> SimplicialComplex:
    """Boundary of the 2-simplex on {0, 1, 2}: the smallest triangulated circle."""
    return close_downward([[0, 1], [1, 2], [0, 2]], [0, 1, 2])


def full_triangle() -> SimplicialComplex:
    return close_downward([[0, 1, 2]], [0, 1, 2])


def tetrahedron_boundary() -> SimplicialComplex:
    """Boundary of the 3-simplex on {0, 1, 2, 3}: a 2-sphere with 4 triangles."""
    return close_downward([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], range(4))


def hexagon() -> SimplicialComplex:
    """The 6-cycle 0-1-2-3-4-5-0."""
    return close_downward([[i, (i + 1) % 6] for i in range(6)], range(6))


def rp2() -> SimplicialComplex:
    """Six-vertex real projective plane (the hemi-icosahedron), 10 triangles.

    Facets as usually listed on vertices 1..6 (124, 126, 135, 136, 145,
    234, 235, 256, 346, 456), shifted down by one.
    """
    facets = "124 126 135 136 145 234 235 256 346 456".split()
    return close_downward([[int(c) - 1 for c in f] for f in facets], range(6))


def torus7() -> SimplicialComplex:
    """Moebius-Csaszar seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
    facets += [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
    return close_downward(facets, range(7))


COMPLEXES = {
    "point": point,
    "triangle": triangle_boundary,
    "full_triangle": full_triangle,
    "tetrahedron": tetrahedron_boundary,
    "hexagon": hexagon,
    "rp2": rp2,
    "torus7": torus7,
}

# cover sets on the hexagon
COVER_AB = {"a": [0, 1, 2], "b": [3, 4, 5]}
COVER_ABC = {"a": [0, 1, 2], "b": [2, 3, 4], "c": [4, 5, 0]}
COVER_WIDE = {"a": [0, 1, 2, 3], "b": [3, 4, 5, 0]}


def cover_ab() -> StarCover:
    """Two arcs whose double intersection is two disjoint pieces; the nerve is a segment."""
    return StarCover(hexagon(), COVER_AB)


def cover_abc() -> StarCover:
    """Three overlapping arcs; the nerve is the boundary of a triangle."""
    return StarCover(hexagon(), COVER_ABC)


def cover_wide() -> StarCover:
    return StarCover(hexagon(), COVER_WIDE)


def single_set_cover(K: SimplicialComplex) -> StarCover:
    return StarCover(K, {"all": list(K.vertices)})


def main_theorem_cases() -> list[tuple[str, StarCover]]:
    """Covers for the comparison of the two maps out of the nerve's cohomology."""
    return [
        ("triangle/star", star_cover(triangle_boundary())),
        ("tetrahedron/star", star_cover(tetrahedron_boundary())),
        ("hexagon/ab", cover_ab()),
        ("hexagon/abc", cover_abc()),
        ("rp2/star", star_cover(rp2())),
    ]
