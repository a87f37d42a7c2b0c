"""The Mayer-Vietoris double complex of a cover at a fixed subdivision level.

Bidegree ``(p, q)`` with ``p, q >= 0`` holds functions of pairs
``(itup, sigma)``: ``itup`` is an ordered ``(p+1)``-tuple of cover indices
(repeats allowed) and ``sigma`` an algebraic ``q``-simplex of the level
complex lying in every ``U_i`` with ``i`` in ``itup``. Two augmentations are
glued on:

* row ``p = -1``: global cochains on small simplices, keyed by ``sigma``;
* column ``q = -1``: Cech cochains, keyed by ``itup`` (an algebraic simplex of
  the nerve).

Restriction to a smaller intersection is key filtering, so every operator
below is a signed scatter over keys.
"""

from __future__ import annotations

import itertools
import weakref
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy import sparse

from .complexes import Cochain, SimplicialComplex
from .covers import StarCover
from .errors import DimensionMismatchError, InvalidComplexError, PreconditionError
from .linalg import SparseMatrix, cohomology_at
from .rings import QQ, RingSpec

DEFAULT_P_CAP = 4

# ring-independent caches (bases, smallness, integer operator matrices),
# shared by every MayerVietoris built on the same cover and level
_SHARED: "weakref.WeakKeyDictionary[StarCover, dict]" = weakref.WeakKeyDictionary()


class DoubleCochain:
    """Sparse element of ``C^{p,q}``; zero entries are never stored.

    Keys are ``(itup, sigma)`` in the interior, ``sigma`` on row ``p = -1``
    and ``itup`` on column ``q = -1``.
    """

    __slots__ = ("p", "q", "values", "ring")

    def __init__(self, p: int, q: int, values: Mapping | Iterable = (), ring: RingSpec = QQ):
        if p < -1 or q < -1 or (p == -1 and q == -1):
            raise DimensionMismatchError(f"invalid bidegree ({p}, {q})")
        self.p, self.q, self.ring = p, q, ring
        items = values.items() if hasattr(values, "items") else values
        reduce = ring.reduce
        self.values = {k: r for k, v in items if (r := reduce(v))}

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.p, self.q

    def component(self, itup: tuple) -> dict:
        """The simplicial cochain ``c_itup`` as a map ``sigma -> value``."""
        if self.p < 0 or self.q < 0:
            raise DimensionMismatchError("components exist only in the interior of the double complex")
        return {s: v for (t, s), v in self.values.items() if t == itup}

    def is_zero(self) -> bool:
        return not self.values

    def _check(self, other: "DoubleCochain") -> None:
        if self.bidegree != other.bidegree or self.ring != other.ring:
            raise DimensionMismatchError("double cochains live in different spaces")

    def __add__(self, other: "DoubleCochain") -> "DoubleCochain":
        self._check(other)
        acc = defaultdict(int, self.values)
        for k, v in other.values.items():
            acc[k] += v
        return DoubleCochain(self.p, self.q, acc, self.ring)

    def __neg__(self) -> "DoubleCochain":
        return DoubleCochain(self.p, self.q, {k: -v for k, v in self.values.items()}, self.ring)

    def __sub__(self, other: "DoubleCochain") -> "DoubleCochain":
        return self + (-other)

    def __rmul__(self, scalar) -> "DoubleCochain":
        return DoubleCochain(self.p, self.q, {k: scalar * v for k, v in self.values.items()}, self.ring)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DoubleCochain):
            return NotImplemented
        return self.bidegree == other.bidegree and self.ring == other.ring and self.values == other.values

    __hash__ = None

    def __repr__(self) -> str:
        return f"DoubleCochain(({self.p}, {self.q}), ring={self.ring}, support={len(self.values)})"


# ---------------------------------------------------------------------------
# choice rules


class ChoiceRule:
    """Assigns to each small simplex an index ``i(sigma)`` with ``sigma`` small in ``U_i``.

    ``pick`` receives the vertex set of the simplex; results are memoised.
    """

    def __init__(self, name: str, pick: Callable[[frozenset], object]):
        self.name = name
        self._pick = pick
        self._memo: dict = {}

    def __call__(self, simplex: Iterable) -> object:
        key = frozenset(simplex)
        if key not in self._memo:
            self._memo[key] = self._pick(key)
        return self._memo[key]

    def __repr__(self) -> str:
        return f"ChoiceRule({self.name!r})"


def least_index_rule(cover: StarCover, r: int) -> ChoiceRule:
    return ChoiceRule("min", lambda s: min(cover.small_indices(r, s), key=cover.rank))


def greatest_index_rule(cover: StarCover, r: int) -> ChoiceRule:
    return ChoiceRule("max", lambda s: max(cover.small_indices(r, s), key=cover.rank))


def max_vertex_rule(cover: StarCover) -> ChoiceRule:
    """For the open-star cover at level 1: the least max-vertex image over the simplex.

    Each level-1 vertex is the barycenter of a base simplex; its image under
    the max-vertex map is the largest vertex of that simplex. A level-1
    simplex is a chain of base simplices, and the least of these maxima is a
    vertex of every simplex in the chain, hence a valid index.
    """
    if not cover.is_star_cover():
        raise PreconditionError("the max-vertex rule is defined for the open-star cover only")
    parent = cover.tower.level(1).parent
    return ChoiceRule("vertex", lambda s: min((parent[v][-1] for v in s), key=cover.rank))


def default_choice_rule(cover: StarCover, r: int) -> ChoiceRule:
    """Max-vertex rule for the open-star cover at level 1, least admissible index otherwise."""
    if cover.is_star_cover() and r == 1:
        return max_vertex_rule(cover)
    return least_index_rule(cover, r)


def choice_rule(name: str, cover: StarCover, r: int) -> ChoiceRule:
    """Look up a rule by name: ``min``, ``max``, ``vertex`` or ``default``."""
    table = {
        "min": lambda: least_index_rule(cover, r),
        "max": lambda: greatest_index_rule(cover, r),
        "vertex": lambda: max_vertex_rule(cover),
        "default": lambda: default_choice_rule(cover, r),
    }
    if name not in table:
        raise ValueError(f"unknown choice rule {name!r}")
    return table[name]()


# ---------------------------------------------------------------------------
# the double complex


@dataclass
class RowExactnessReport:
    passed: bool
    q: int
    max_p: int
    checked: list = field(default_factory=list)
    failure: tuple | None = None
    witness: DoubleCochain | None = None
    residual: DoubleCochain | None = None
    per_simplex: dict = field(default_factory=dict)


class MayerVietoris:
    """Operators of the augmented double complex of ``cover`` at level ``level``."""

    def __init__(self, cover: StarCover, level: int, ring: RingSpec = QQ, p_cap: int = DEFAULT_P_CAP):
        self.cover = cover
        self.level = level
        self.ring = ring
        self.p_cap = p_cap
        self.complex: SimplicialComplex = cover.tower.complex(level)
        self.nerve: SimplicialComplex = cover.nerve()
        shared = _SHARED.setdefault(cover, {}).setdefault(level, {})
        self._bases: dict = shared.setdefault("bases", {})
        self._vertex_cache: dict = shared.setdefault("vertices", {})
        self._small_cache: dict = shared.setdefault("small", {})
        self._cob_cache: dict = shared.setdefault("cob", {})
        self._int_mats: dict = shared.setdefault("mats", {})

    # -- bookkeeping -------------------------------------------------------

    def small(self, simplex: Iterable) -> frozenset:
        """``I(sigma)``: indices of the sets containing the closed simplex."""
        try:
            return self._small_cache[simplex]
        except (KeyError, TypeError):
            out = self.cover.small_indices(self.level, simplex)
            if isinstance(simplex, tuple):
                self._small_cache[simplex] = out
            return out

    def _coboundary_terms(self, s: tuple) -> list:
        """``[(u, sign, I(u))]`` over the cofaces ``u`` of ``s`` with ``I(u)`` nonempty."""
        terms = self._cob_cache.get(s)
        if terms is None:
            terms = []
            for w in self.complex.extension_vertices(frozenset(s)):
                for k in range(len(s) + 1):
                    u = s[:k] + (w,) + s[k:]
                    iu = self.small(u)
                    if iu:
                        terms.append((u, 1 if k % 2 == 0 else -1, iu))
            self._cob_cache[s] = terms
        return terms

    def ordered(self, indices: Iterable) -> list:
        return sorted(indices, key=self.cover.rank)

    def basis(self, p: int, q: int) -> tuple:
        """Keys of ``C^{p,q}`` in a fixed order."""
        if (p, q) not in self._bases:
            if p < -1 or q < -1 or (p == -1 and q == -1):
                raise DimensionMismatchError(f"invalid bidegree ({p}, {q})")
            if q == -1:
                out = self.nerve.algebraic_simplices(p)
            elif p == -1:
                out = tuple(s for s in self.complex.algebraic_simplices(q) if self.small(s))
            else:
                out = tuple(
                    (t, s)
                    for s in self.complex.algebraic_simplices(q)
                    for t in itertools.product(self.ordered(self.small(s)), repeat=p + 1)
                )
            self._bases[p, q] = out
        return self._bases[p, q]

    def unit(self, p: int, q: int, key) -> DoubleCochain:
        return DoubleCochain(p, q, {key: 1}, self.ring)

    def zero(self, p: int, q: int) -> DoubleCochain:
        return DoubleCochain(p, q, (), self.ring)

    def from_cech(self, phi: Cochain) -> DoubleCochain:
        """A Cech cochain (ordered cochain on the nerve) as an element of column ``q = -1``."""
        if phi.complex != self.nerve:
            raise InvalidComplexError("Cech cochain must live on the nerve of the cover")
        return DoubleCochain(phi.degree, -1, phi.values, self.ring)

    def as_cochain(self, c: DoubleCochain) -> Cochain:
        """An element of row ``p = -1`` as a cochain on the level complex."""
        if c.p != -1:
            raise DimensionMismatchError("only row p = -1 holds global cochains")
        return Cochain(self.complex, c.q, c.values, self.ring, check=False)

    def from_cochain(self, c: Cochain) -> DoubleCochain:
        """Restrict a level-``r`` cochain to small simplices, as an element of row ``p = -1``."""
        if c.complex != self.complex:
            raise InvalidComplexError("cochain must live on the level complex")
        return DoubleCochain(-1, c.degree, {s: v for s, v in c.values.items() if self.small(s)}, self.ring)

    def _small_vertices(self, itup: tuple) -> list:
        key = frozenset(itup)
        if key not in self._vertex_cache:
            self._vertex_cache[key] = [w for w in self.complex.vertices if key <= self.small((w,))]
        return self._vertex_cache[key]

    # -- differentials -----------------------------------------------------

    def _dh(self, p: int, q: int, values: Mapping) -> dict:
        out: dict = defaultdict(int)
        if p == -1:
            for s, v in values.items():
                for j in self.small(s):
                    out[(j,), s] += v
        elif q == -1:
            for t, v in values.items():
                for j in self.nerve.extension_vertices(frozenset(t)):
                    for k in range(p + 2):
                        out[t[:k] + (j,) + t[k:]] += v if k % 2 == 0 else -v
        else:
            for (t, s), v in values.items():
                for j in self.small(s):
                    for k in range(p + 2):
                        out[t[:k] + (j,) + t[k:], s] += v if k % 2 == 0 else -v
        return out

    def delta_h(self, c: DoubleCochain) -> DoubleCochain:
        """Horizontal differential ``C^{p,q} -> C^{p+1,q}`` (alternating sum over omitted indices)."""
        return DoubleCochain(c.p + 1, c.q, self._dh(c.p, c.q, c.values), c.ring)

    def _dv(self, p: int, q: int, values: Mapping) -> dict:
        out: dict = defaultdict(int)
        if q == -1:
            for t, v in values.items():
                for w in self._small_vertices(t):
                    out[t, (w,)] += v
        elif p == -1:
            for s, v in values.items():
                for u, sign, _ in self._coboundary_terms(s):
                    out[u] += sign * v
        else:
            for (t, s), v in values.items():
                need = frozenset(t)
                for u, sign, iu in self._coboundary_terms(s):
                    if need <= iu:
                        out[t, u] += sign * v
        return out

    def delta_v(self, c: DoubleCochain) -> DoubleCochain:
        """Vertical differential ``C^{p,q} -> C^{p,q+1}``: the simplicial coboundary on each component."""
        return DoubleCochain(c.p, c.q + 1, self._dv(c.p, c.q, c.values), c.ring)

    def total_differential(self, x: Mapping[tuple, DoubleCochain], n: int, p_cap: int | None = None) -> dict:
        """``delta = sum_{p+q=n} (delta_h + (-1)^p delta_v)`` on the total complex truncated at ``p <= p_cap``.

        Rows above the cap form a subcomplex, so truncation is a quotient
        complex and the result still squares to zero.
        """
        cap = self.p_cap if p_cap is None else p_cap
        out: dict = {}
        for (p, q), c in x.items():
            if p < 0 or q < 0 or p + q != n or p > cap or c.bidegree != (p, q):
                raise DimensionMismatchError(f"component ({p}, {q}) is outside the truncated total complex of degree {n}")
            parts = [self.delta_v(c) if p % 2 == 0 else -self.delta_v(c)]
            if p + 1 <= cap:
                parts.append(self.delta_h(c))
            for part in parts:
                out[part.bidegree] = out[part.bidegree] + part if part.bidegree in out else part
        return out

    # -- contraction and zigzag -------------------------------------------

    def _contract(self, p: int, values: Mapping, rule: ChoiceRule) -> dict:
        out = {}
        for (t, s), v in values.items():
            i = rule(s)
            if i not in self.small(s):
                raise PreconditionError(f"choice rule {rule.name!r} picked {i!r}, which does not contain {s}")
            if t[0] == i:
                out[(t[1:], s) if p > 0 else s] = v
        return out

    def contraction(self, c: DoubleCochain, rule: ChoiceRule) -> DoubleCochain:
        """``(Kc)_itup(sigma) = c_{(i(sigma),) + itup}(sigma)``; lands in row ``p = -1`` when ``p = 0``."""
        p, q = c.bidegree
        if p < 0 or q < 0:
            raise DimensionMismatchError("the contraction is defined for p, q >= 0")
        return DoubleCochain(p - 1, q, self._contract(p, c.values, rule), c.ring)

    def zeta_tilde(self, phi: Cochain | DoubleCochain, rule: ChoiceRule | None = None) -> DoubleCochain:
        """Zigzag lift of a Cech cochain of degree ``p`` to row ``p = -1`` in degree ``p``.

        ``(-1)^{p(p+1)/2} K delta_v K delta_v ... K delta_v`` with ``p + 1``
        contractions, starting from the constant augmentation.
        """
        if rule is None:
            rule = default_choice_rule(self.cover, self.level)
        x = phi if isinstance(phi, DoubleCochain) else self.from_cech(phi)
        if x.q != -1:
            raise DimensionMismatchError("zeta_tilde takes a Cech cochain (column q = -1)")
        p = x.p
        x = self.delta_v(x)
        for k in range(p, -1, -1):
            x = self.contraction(x, rule)
            if k > 0:
                x = self.delta_v(x)
        return x if (p * (p + 1) // 2) % 2 == 0 else -x

    def zeta_cochain(self, phi: Cochain, rule: ChoiceRule | None = None) -> Cochain:
        """``zeta_tilde`` as a cochain on the level complex."""
        return self.as_cochain(self.zeta_tilde(phi, rule))

    # -- matrices and checks ----------------------------------------------

    def operator_matrix(self, op: Callable[[DoubleCochain], DoubleCochain], p: int, q: int) -> SparseMatrix:
        """Matrix of ``op`` on ``C^{p,q}`` in the ordered bases (columns = images of unit cochains)."""
        cols, target = [], None
        for key in self.basis(p, q):
            img = op(self.unit(p, q, key))
            target = img.bidegree
            cols.append(img.values)
        if target is None:
            target = op(self.zero(p, q)).bidegree
        index = {k: n for n, k in enumerate(self.basis(*target))}
        entries = {}
        for j, col in enumerate(cols):
            for k, v in col.items():
                if k not in index:
                    raise InvalidComplexError(f"operator produced key {k!r} outside C^{target}")
                entries[index[k], j] = v
        return SparseMatrix.build(len(index), len(cols), entries, self.ring)

    def integer_matrix(self, kind: str, p: int, q: int, rule: ChoiceRule | None = None) -> sparse.csr_matrix:
        """Integer matrix of ``delta_h`` (``"h"``), ``delta_v`` (``"v"``) or ``K`` (``"K"``) on ``C^{p,q}``.

        All three operators have integer entries, so the matrix over any of
        the supported rings is the reduction of this one.
        """
        key = (kind, p, q, rule)
        if key not in self._int_mats:
            if kind == "h":
                target, apply = (p + 1, q), lambda e: self._dh(p, q, e)
            elif kind == "v":
                target, apply = (p, q + 1), lambda e: self._dv(p, q, e)
            elif kind == "K":
                if rule is None or p < 0 or q < 0:
                    raise ValueError("the contraction matrix needs a rule and p, q >= 0")
                target, apply = (p - 1, q), lambda e: self._contract(p, e, rule)
            else:
                raise ValueError(f"unknown operator {kind!r}")
            index = {k: n for n, k in enumerate(self.basis(*target))}
            rows, cols, data = [], [], []
            for j, b in enumerate(self.basis(p, q)):
                for k, v in apply({b: 1}).items():
                    if v:
                        rows.append(index[k])
                        cols.append(j)
                        data.append(v)
            shape = (len(index), len(self.basis(p, q)))
            self._int_mats[key] = sparse.csr_matrix((data, (rows, cols)), shape=shape, dtype=np.int64)
        return self._int_mats[key]

    def _first_nonzero_column(self, m) -> int | None:
        """Least column index with an entry that is nonzero in ``self.ring``."""
        m = sparse.coo_matrix(m)
        data = m.data % self.ring.p if self.ring.kind == "Fp" else m.data
        cols = m.col[data != 0]
        return int(cols.min()) if cols.size else None

    def contraction_residual(self, key, p: int, q: int, rule: ChoiceRule, contraction=None) -> DoubleCochain:
        """``(delta_h K + K delta_h - id)`` applied to the unit cochain at ``key``.

        A replacement ``contraction`` (same signature as :meth:`contraction`)
        may be supplied, e.g. to exercise the check with a faulty operator.
        """
        K = contraction or self.contraction
        e = self.unit(p, q, key)
        out = K(self.delta_h(e), rule) - e
        if p >= 0:
            out = out + self.delta_h(K(e, rule))
        return out

    def contraction_identity_failure(self, p: int, q: int, rule: ChoiceRule) -> int | None:
        """Column of the first failure of ``delta_h K + K delta_h = id`` on ``C^{p,q}``, or ``None``."""
        n = len(self.basis(p, q))
        lhs = self.integer_matrix("K", p + 1, q, rule) @ self.integer_matrix("h", p, q)
        if p >= 0:
            lhs = lhs + self.integer_matrix("h", p - 1, q) @ self.integer_matrix("K", p, q, rule)
        return self._first_nonzero_column(lhs - sparse.identity(n, dtype=np.int64, format="csr"))

    def check_complex_axioms(self, max_p: int, max_q: int) -> list[tuple]:
        """Failures of ``dh^2 = 0``, ``dv^2 = 0``, ``dh dv = dv dh`` and ``delta^2 = 0``.

        Checked as exact matrix identities on every ``C^{p,q}`` with
        ``-1 <= p <= max_p`` and ``-1 <= q <= max_q``, augmentations
        included. ``delta^2`` is the total differential squared, restricted
        to the block ``(p, q)`` of the interior and truncated at ``p_cap``.
        Returns ``(identity, (p, q), key)`` triples; empty means all hold.
        """
        H = lambda p, q: self.integer_matrix("h", p, q)  # noqa: E731
        V = lambda p, q: self.integer_matrix("v", p, q)  # noqa: E731
        failures = []

        def record(name, p, q, m):
            col = self._first_nonzero_column(m)
            if col is not None:
                failures.append((name, (p, q), self.basis(p, q)[col]))

        for p in range(-1, max_p + 1):
            for q in range(-1, max_q + 1):
                if p == q == -1:
                    continue
                record("dh^2", p, q, H(p + 1, q) @ H(p, q))
                record("dv^2", p, q, V(p, q + 1) @ V(p, q))
                record("dh dv = dv dh", p, q, H(p, q + 1) @ V(p, q) - V(p + 1, q) @ H(p, q))
                if p < 0 or q < 0 or p >= self.p_cap:
                    continue
                # total differential: d = dh + (-1)^p dv, components beyond p_cap dropped
                sign = 1 if p % 2 == 0 else -1
                blocks = [V(p, q + 1) @ V(p, q)]
                if p + 1 <= self.p_cap:
                    blocks.append(sign * (-1) * V(p + 1, q) @ H(p, q) + sign * H(p, q + 1) @ V(p, q))
                if p + 2 <= self.p_cap:
                    blocks.append(H(p + 1, q) @ H(p, q))
                for m in blocks:
                    if self._first_nonzero_column(m) is not None:
                        record("delta^2", p, q, m)
                        break
        return failures

    def per_simplex_complex(self, s) -> tuple[list[SparseMatrix], list[list]]:
        """Matrices of the horizontal differential restricted to one small simplex.

        Degrees run from ``-1`` (the simplex itself) through ``p_cap``; the
        complex is the augmented ordered cochain complex of the full simplex
        on ``I(sigma)``. Also returns the keys indexing each degree.
        """
        q = len(s) - 1
        mats = []
        prev = [s]
        keys = [prev]
        for p in range(-1, self.p_cap):
            nxt = [(t, s) for t in itertools.product(self.ordered(self.small(s)), repeat=p + 2)]
            index = {k: n for n, k in enumerate(nxt)}
            entries = {}
            for j, key in enumerate(prev):
                for k, v in self.delta_h(self.unit(p, q, key)).values.items():
                    entries[index[k], j] = v
            mats.append(SparseMatrix.build(len(nxt), len(prev), entries, self.ring))
            prev = nxt
            keys.append(nxt)
        return mats, keys

    def verify_row_exactness(self, q: int, max_p: int, rule: ChoiceRule | None = None, contraction=None) -> RowExactnessReport:
        """Check ``delta_h K + K delta_h = id`` on row ``q`` for ``-1 <= p <= max_p``.

        Also spot-checks that each per-simplex row complex is acyclic. That
        complex depends only on ``|I(sigma)|``, so one simplex per size is
        examined.
        """
        if max_p + 1 > self.p_cap:
            raise PreconditionError(f"max_p = {max_p} needs p_cap >= {max_p + 1}")
        rule = rule or default_choice_rule(self.cover, self.level)
        report = RowExactnessReport(True, q, max_p)
        for p in range(-1, max_p + 1):
            if contraction is None:
                col = self.contraction_identity_failure(p, q, rule)
                bad = [] if col is None else [self.basis(p, q)[col]]
            else:
                bad = (k for k in self.basis(p, q) if not self.contraction_residual(k, p, q, rule, contraction).is_zero())
            for key in bad:
                report.passed = False
                report.failure = (p, q)
                report.witness = self.unit(p, q, key)
                report.residual = self.contraction_residual(key, p, q, rule, contraction)
                return report
            report.checked.append((p, q))
        seen = {}
        for s in self.complex.algebraic_simplices(q):
            size = len(self.small(s))
            if size and size not in seen:
                seen[size] = s
        for size, s in sorted(seen.items()):
            mats, keys = self.per_simplex_complex(s)
            zero_in = SparseMatrix.zeros(1, 0, self.ring)
            for d in range(max_p + 1):
                h = cohomology_at(mats[d], mats[d - 1] if d > 0 else zero_in, self.ring)
                if h.ngens:
                    report.per_simplex[size] = False
                    report.passed = False
                    report.failure = (d - 1, q)
                    rep = h.representatives[0]
                    report.witness = DoubleCochain(d - 1, q, zip(keys[d], rep), self.ring)
                    return report
            report.per_simplex[size] = True
        return report


def small_subcomplex(cover: StarCover, r: int, itup: Iterable) -> SimplicialComplex:
    """Simplices of level ``r`` lying in every ``U_i`` for ``i`` in ``itup``."""
    need = frozenset(itup)
    K = cover.tower.complex(r)
    sims = [s for s in K.all_simplices() if need <= cover.small_indices(r, s)]
    if not sims:
        raise PreconditionError(f"no level-{r} simplex is small in {tuple(itup)!r}")
    return K.subcomplex(sims)
