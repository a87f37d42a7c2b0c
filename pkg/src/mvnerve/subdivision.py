"""Barycentric subdivision tower with exact barycentric coordinates.

Level 0 is the base complex. A vertex of level ``r+1`` is the barycenter of
a simplex of level ``r`` (its *parent*); vertices of level ``r+1`` get dense
integer ids ordered by (parent dimension, parent vertex list). Coordinates
always refer to the vertices of level 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import Cochain, SimplicialComplex, SimplicialMap, close_downward, pullback
from .errors import InvalidComplexError

Coords = tuple[Fraction, ...]


@dataclass(frozen=True, eq=False)
class SubdivisionLevel:
    level: int
    complex: SimplicialComplex
    coords: Mapping[object, Coords]
    parent: Mapping[object, tuple]

    def realize(self, sigma: Sequence) -> list[Coords]:
        """Vertex coordinates of the linear singular simplex spanned by ``sigma``, in tuple order."""
        if not self.complex.is_simplex(sigma):
            raise InvalidComplexError(f"{tuple(sigma)} is not an algebraic simplex at level {self.level}")
        return [self.coords[v] for v in sigma]


def base_level(K: SimplicialComplex) -> SubdivisionLevel:
    n = len(K.vertices)
    coords = {
        v: tuple(Fraction(int(i == j)) for j in range(n)) for i, v in enumerate(K.vertices)
    }
    return SubdivisionLevel(0, K, coords, {})


def subdivide(lvl: SubdivisionLevel) -> SubdivisionLevel:
    """Barycentric subdivision of one level."""
    K = lvl.complex
    parents = [s for dim in K.simplices for s in dim]
    ids = {s: i for i, s in enumerate(parents)}
    flags = []
    for facet in K.facets:
        for perm in itertools.permutations(facet):
            flags.append([ids[K.canonical(perm[: k + 1])] for k in range(len(perm))])
    complex_ = close_downward(flags, range(len(parents)))
    coords = {}
    for s, i in ids.items():
        vecs = [lvl.coords[v] for v in s]
        coords[i] = tuple(sum(col) / len(s) for col in zip(*vecs))
    return SubdivisionLevel(lvl.level + 1, complex_, coords, {i: s for s, i in ids.items()})


def max_vertex_map(finer: SubdivisionLevel, coarser: SubdivisionLevel) -> SimplicialMap:
    """Send each barycenter to the largest vertex of its parent simplex."""
    if finer.level != coarser.level + 1:
        raise ValueError("levels must be adjacent")
    # parents are stored in increasing order, so the last vertex is the maximum
    return SimplicialMap(finer.complex, coarser.complex, {v: s[-1] for v, s in finer.parent.items()})


def min_vertex_map(finer: SubdivisionLevel, coarser: SubdivisionLevel) -> SimplicialMap:
    return SimplicialMap(finer.complex, coarser.complex, {v: s[0] for v, s in finer.parent.items()})


class SubdivisionTower:
    """Levels ``K^(0), K^(1), ...`` and the max-vertex maps between them.

    Levels are created on demand and never modified afterwards.
    """

    def __init__(self, base: SimplicialComplex):
        self.base = base
        self.levels: list[SubdivisionLevel] = [base_level(base)]
        self.approximations: list[SimplicialMap] = []

    def level(self, r: int) -> SubdivisionLevel:
        if r < 0:
            raise ValueError("negative level")
        while len(self.levels) <= r:
            nxt = subdivide(self.levels[-1])
            self.approximations.append(max_vertex_map(nxt, self.levels[-1]))
            self.levels.append(nxt)
        return self.levels[r]

    def complex(self, r: int) -> SimplicialComplex:
        return self.level(r).complex

    def approximation(self, r: int) -> SimplicialMap:
        """Max-vertex map from level ``r+1`` to level ``r``."""
        self.level(r + 1)
        return self.approximations[r]

    def composite(self, r_from: int, r_to: int) -> SimplicialMap:
        """Composite of max-vertex maps from level ``r_to`` down to level ``r_from``."""
        if r_to < r_from:
            raise ValueError(f"cannot map level {r_to} to the finer level {r_from}")
        f = SimplicialMap.identity(self.complex(r_from))
        for r in range(r_from, r_to):
            f = f.compose(self.approximation(r))
        return f


def comparison_pullback(tower: SubdivisionTower, r_from: int, r_to: int, c: Cochain) -> Cochain:
    """Pull ``c`` from level ``r_from`` up to level ``r_to`` along max-vertex maps."""
    if r_to < r_from:
        raise ValueError(f"target level {r_to} is below source level {r_from}")
    c = c.on(tower.complex(r_from)) if c.complex is not tower.complex(r_from) else c
    for r in range(r_from, r_to):
        c = pullback(tower.approximation(r), c)
    return c


def subdivided_map(h: SimplicialMap, source: SubdivisionTower, target: SubdivisionTower, r: int) -> SimplicialMap:
    """The level-``r`` subdivision of a base simplicial map: barycenters go to barycenters of images."""
    if h.source != source.base or h.target != target.base:
        raise InvalidComplexError("map does not connect the two base complexes")
    f = h
    for k in range(r):
        src, tgt = source.level(k + 1), target.level(k + 1)
        tgt_ids = {s: v for v, s in tgt.parent.items()}
        f = SimplicialMap(src.complex, tgt.complex, {v: tgt_ids[f.image(s)] for v, s in src.parent.items()})
    return f
