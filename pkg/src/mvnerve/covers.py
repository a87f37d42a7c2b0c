"""Covers of ``|K|`` by unions of open vertex stars, and their nerves.

Set ``i`` is ``U_i = {x : sum_{a in A_i} x_a > 0}`` for a vertex subset
``A_i`` of the base complex. The function ``x -> sum_{a in A_i} x_a`` is
affine on every simplex and nonnegative, so a closed simplex lies in
``U_i`` exactly when each of its vertices does. All membership questions
therefore reduce to sign checks on exact vertex coordinates.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .complexes import Cochain, SimplicialComplex, SimplicialMap, close_downward, coboundary, is_cocycle, pullback
from .errors import InvalidComplexError, NotACocycleError, PreconditionError, SafetyCapExceeded
from .subdivision import SubdivisionTower, comparison_pullback

LEVEL_CAP = 12


class StarCover:
    """Finite cover of ``|K|`` by open-star unions ``U_i``, indexed in a fixed order."""

    def __init__(
        self,
        base: SubdivisionTower | SimplicialComplex,
        sets: Mapping[Hashable, Iterable],
        order: Sequence[Hashable] | None = None,
    ):
        self.tower = base if isinstance(base, SubdivisionTower) else SubdivisionTower(base)
        K = self.tower.base
        if order is None:
            order = sorted(sets)
        elif set(order) != set(sets) or len(set(order)) != len(order):
            raise PreconditionError("cover order must list every set id exactly once")
        cleaned = {}
        for i in order:
            members = frozenset(sets[i])
            for a in members:
                if a not in K._pos:
                    raise InvalidComplexError(f"cover set {i!r} references unknown vertex {a!r}")
            if not members:
                warnings.warn(f"dropping empty cover set {i!r}", stacklevel=2)
                continue
            cleaned[i] = members
        self.index_set: tuple = tuple(i for i in order if i in cleaned)
        self.sets: dict = cleaned
        self._rank = {i: k for k, i in enumerate(self.index_set)}
        missing = set(K.vertices).difference(*cleaned.values()) if cleaned else set(K.vertices)
        if missing:
            raise PreconditionError(f"vertices {sorted(missing, key=K.position)} are not covered")
        self._positions = {i: [K.position(a) for a in A] for i, A in cleaned.items()}
        self._positive: dict[int, dict] = {}
        self._small: dict = {}
        self._nonempty: dict = {}
        self._nerve: SimplicialComplex | None = None

    @property
    def base(self) -> SimplicialComplex:
        return self.tower.base

    def rank(self, i) -> int:
        return self._rank[i]

    def is_star_cover(self) -> bool:
        """Whether this is the open-star cover ``A_v = {v}`` indexed by the base vertices."""
        return self.index_set == self.base.vertices and all(self.sets[v] == {v} for v in self.index_set)

    # -- membership ------------------------------------------------------

    def set_weight(self, r: int, v, i) -> Fraction:
        """``sum_{a in A_i} x_a`` at the level-``r`` vertex ``v``."""
        x = self.tower.level(r).coords[v]
        return sum((x[k] for k in self._positions[i]), Fraction(0))

    def positive_sets(self, r: int, v) -> frozenset:
        """Indices ``i`` with ``v`` in ``U_i``."""
        table = self._positive.setdefault(r, {})
        if v not in table:
            x = self.tower.level(r).coords[v]
            table[v] = frozenset(i for i, pos in self._positions.items() if any(x[k] for k in pos))
        return table[v]

    def small_indices(self, r: int, simplex: Iterable) -> frozenset:
        """All ``i`` whose ``U_i`` contains the closed level-``r`` simplex."""
        key = (r, frozenset(simplex))
        if key not in self._small:
            verts = key[1]
            out = None
            for v in verts:
                ps = self.positive_sets(r, v)
                out = ps if out is None else out & ps
            self._small[key] = out if out is not None else frozenset()
        return self._small[key]

    def simplex_small_in(self, r: int, simplex: Iterable, itup: Sequence) -> bool:
        return set(itup) <= self.small_indices(r, simplex)

    def intersection_nonempty(self, itup: Sequence) -> bool:
        """Whether ``U_{i_0} & ... & U_{i_p}`` is nonempty.

        Witnessed by a base simplex meeting every ``A_{i_k}`` (its barycenter
        lies in all of them).
        """
        key = frozenset(itup)
        if key not in self._nonempty:
            if not key <= self.sets.keys():
                raise PreconditionError(f"unknown cover index in {tuple(itup)!r}")
            sets = [self.sets[i] for i in key]
            self._nonempty[key] = any(
                all(not A.isdisjoint(s) for A in sets) for s in self.base.all_simplices()
            )
        return self._nonempty[key]

    def nerve(self) -> SimplicialComplex:
        if self._nerve is None:
            facets = [[i] for i in self.index_set]
            for s in self.base.facets:
                facets.append([i for i in self.index_set if not self.sets[i].isdisjoint(s)])
            self._nerve = close_downward(facets, self.index_set)
        return self._nerve

    def cech_coboundary(self, phi: Cochain) -> Cochain:
        """Coboundary on the Cech complex (= ordered cochains of the nerve)."""
        if phi.complex != self.nerve():
            raise InvalidComplexError("Cech cochain must live on the nerve of this cover")
        return coboundary(phi)

    # -- levels ----------------------------------------------------------

    def smallness_level(self, cap: int = LEVEL_CAP) -> int:
        """Least ``r`` such that every simplex of level ``r`` lies in a single ``U_i``."""
        for r in range(cap + 1):
            if all(self.small_indices(r, s) for s in self.tower.complex(r).facets):
                return r
        raise SafetyCapExceeded(f"cover is not resolved by {cap} barycentric subdivisions")

    def pou_weights(self, r: int, v) -> dict:
        """Partition-of-unity values ``phi_i(v)``, proportional to the set weights."""
        w = {i: self.set_weight(r, v, i) for i in self.index_set}
        total = sum(w.values(), Fraction(0))
        if total <= 0:
            raise PreconditionError(f"vertex {v!r} of level {r} is not covered")
        return {i: x / total for i, x in w.items()}

    def star_candidates(self, r: int) -> dict:
        """For each level-``r`` vertex ``v``, the indices ``i`` with ``st(v)`` inside ``U_i``.

        The open star of ``v`` lies in ``U_i`` iff every simplex containing
        ``v`` has some vertex in ``U_i``.
        """
        K = self.tower.complex(r)
        allowed = {v: set(self.index_set) for v in K.vertices}
        for s in K.all_simplices():
            reach = frozenset().union(*(self.positive_sets(r, w) for w in s))
            for v in s:
                allowed[v] &= reach
        return allowed

    def f_star_approximation(self, tie_break: str = "min", cap: int = LEVEL_CAP) -> tuple[int, SimplicialMap]:
        """Simplicial approximation ``j`` of the partition-of-unity map into the nerve.

        Returns the level ``r'`` (at least the smallness level) and
        ``j: K^(r') -> N``; ``j(v)`` is the least (or greatest, with
        ``tie_break="max"``) admissible index.
        """
        if tie_break not in ("min", "max"):
            raise ValueError("tie_break must be 'min' or 'max'")
        pick = min if tie_break == "min" else max
        for r in range(self.smallness_level(cap), cap + 1):
            allowed = self.star_candidates(r)
            if all(allowed.values()):
                vmap = {v: pick(c, key=self._rank.__getitem__) for v, c in allowed.items()}
                return r, SimplicialMap(self.tower.complex(r), self.nerve(), vmap)
        raise SafetyCapExceeded(f"no star-condition level within {cap} subdivisions")

    def f_star(self, phi: Cochain, target_level: int | None = None, tie_break: str = "min") -> Cochain:
        """Cocycle at ``target_level`` representing the pullback of ``[phi]`` along the partition-of-unity map."""
        if phi.complex != self.nerve():
            raise InvalidComplexError("cochain must live on the nerve")
        if not is_cocycle(phi):
            raise NotACocycleError("f_star needs a cocycle on the nerve")
        r, j = self.f_star_approximation(tie_break)
        L = r if target_level is None else target_level
        if L < r:
            raise ValueError(f"target level {L} is below the approximation level {r}")
        return comparison_pullback(self.tower, r, L, pullback(j, phi.on(j.target)))

    def __repr__(self) -> str:
        body = ", ".join(f"{i!r}: {sorted(self.sets[i], key=self.base.position)}" for i in self.index_set)
        return f"StarCover({{{body}}})"


def star_cover(base: SubdivisionTower | SimplicialComplex) -> StarCover:
    """The open-star cover ``A_v = {v}``, indexed by the base vertices in their order."""
    tower = base if isinstance(base, SubdivisionTower) else SubdivisionTower(base)
    K = tower.base
    return StarCover(tower, {v: [v] for v in K.vertices}, order=K.vertices)
