"""JSON formats for complexes, covers, subdivision levels and naturality specs.

Complex: ``{"vertices": [ints], "facets": [[ints], ...]}``. Parsing and
re-serializing a file in canonical form (facets sorted, each facet sorted by
vertex order, compact separators) reproduces it byte for byte.

Cover: ``{"sets": {"id": [base vertices]}, "order": [ids]}`` with ``order``
optional (default: sorted ids).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .complexes import SimplicialComplex, SimplicialMap, close_downward
from .covers import StarCover
from .errors import InvalidComplexError
from .subdivision import SubdivisionLevel, SubdivisionTower


class MalformedInputError(ValueError):
    """Input is not valid JSON or does not follow the expected layout."""


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: {exc}") from exc


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def complex_from_json(data: Any) -> SimplicialComplex:
    if not isinstance(data, dict) or "vertices" not in data or "facets" not in data:
        raise MalformedInputError('complex JSON needs "vertices" and "facets"')
    verts, facets = data["vertices"], data["facets"]
    if not isinstance(verts, list) or not all(_is_int(v) for v in verts):
        raise MalformedInputError('"vertices" must be an array of integers')
    if not isinstance(facets, list) or not all(isinstance(f, list) and f and all(_is_int(v) for v in f) for f in facets):
        raise MalformedInputError('"facets" must be an array of nonempty integer arrays')
    if len(set(verts)) != len(verts):
        raise InvalidComplexError("duplicate vertex ids")
    known = set(verts)
    for f in facets:
        if not known.issuperset(f):
            raise InvalidComplexError(f"facet {f} uses an undeclared vertex")
        if len(set(f)) != len(f):
            raise InvalidComplexError(f"facet {f} repeats a vertex")
    return close_downward(facets + [[v] for v in verts], verts)


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"vertices": list(K.vertices), "facets": [list(f) for f in K.facets]}


def dumps_canonical(data: Any) -> str:
    return json.dumps(data, separators=(",", ":")) + "\n"


def cover_from_json(data: Any, base: SimplicialComplex | SubdivisionTower) -> StarCover:
    if not isinstance(data, dict) or not isinstance(data.get("sets"), dict):
        raise MalformedInputError('cover JSON needs a "sets" object')
    sets = data["sets"]
    for i, members in sets.items():
        if not isinstance(members, list) or not all(_is_int(v) for v in members):
            raise MalformedInputError(f"cover set {i!r} must be an array of integers")
    order = data.get("order")
    if order is not None and (not isinstance(order, list) or not all(isinstance(i, str) for i in order)):
        raise MalformedInputError('"order" must be an array of set ids')
    return StarCover(base, sets, order)


def cover_to_json(cover: StarCover) -> dict:
    pos = cover.base.position
    out = {"sets": {str(i): sorted(cover.sets[i], key=pos) for i in cover.index_set}}
    ids = [str(i) for i in cover.index_set]
    if ids != sorted(ids):
        out["order"] = ids
    return out


def level_to_json(level: SubdivisionLevel) -> dict:
    """A subdivision level: complex JSON plus base coordinates as rational strings."""
    out = complex_to_json(level.complex)
    out["coords"] = {str(v): [_fraction(x) for x in level.coords[v]] for v in level.complex.vertices}
    return out


def _fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def naturality_from_json(data: Any):
    """Parse ``{"source", "target", "map", "cover_source", "cover_target"}``.

    ``map`` sends source vertex ids (as strings) to target vertex ids. Returns
    ``(h, cover_source, cover_target)``.
    """
    need = ("source", "target", "map", "cover_source", "cover_target")
    if not isinstance(data, dict) or any(k not in data for k in need):
        raise MalformedInputError(f"naturality spec needs keys {list(need)}")
    K = complex_from_json(data["source"])
    L = complex_from_json(data["target"])
    raw = data["map"]
    if not isinstance(raw, dict) or not all(_is_int(v) for v in raw.values()):
        raise MalformedInputError('"map" must send vertex ids to integers')
    try:
        vmap = {int(k): v for k, v in raw.items()}
    except ValueError as exc:
        raise MalformedInputError(f'bad vertex id in "map": {exc}') from exc
    if set(vmap) != set(K.vertices):
        raise InvalidComplexError('"map" must be defined on every source vertex')
    h = SimplicialMap(K, L, vmap)
    return h, cover_from_json(data["cover_source"], K), cover_from_json(data["cover_target"], L)


def naturality_to_json(h: SimplicialMap, cover_source: StarCover, cover_target: StarCover) -> dict:
    return {
        "source": complex_to_json(h.source),
        "target": complex_to_json(h.target),
        "map": {str(v): h(v) for v in h.source.vertices},
        "cover_source": cover_to_json(cover_source),
        "cover_target": cover_to_json(cover_target),
    }
