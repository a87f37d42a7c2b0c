"""Finite simplicial complexes, ordered cochains, pullbacks and cohomology.

Cochains live on *algebraic* simplices: ordered tuples of vertices, repeats
allowed, whose underlying set is a simplex. Cohomology is computed on the
alternating subcomplex, whose basis is the set of simplices written in
increasing vertex order.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DimensionMismatchError, InvalidComplexError, NotACocycleError
from .linalg import CohomologyPresentation, SpanSolver, SparseMatrix, cohomology_at
from .rings import QQ, RingSpec

Vertex = Hashable
Simplex = tuple  # vertices in increasing complex order
AlgebraicSimplex = tuple  # any order, repeats allowed


class SimplicialComplex:
    """A downward-closed family of vertex sets with a fixed total vertex order.

    Every vertex is itself a simplex. Simplices are stored per dimension as
    tuples sorted in the vertex order; each dimension is listed
    lexicographically in that order.
    """

    def __init__(self, vertices: Sequence[Vertex], simplices: Iterable[Iterable[Vertex]]):
        self.vertices = tuple(vertices)
        self._pos = {v: i for i, v in enumerate(self.vertices)}
        if len(self._pos) != len(self.vertices):
            raise InvalidComplexError("duplicate vertex identifiers")
        by_dim: dict[int, set] = defaultdict(set)
        for v in self.vertices:
            by_dim[0].add((v,))
        for s in simplices:
            t = self.canonical(s)
            if not t:
                raise InvalidComplexError("empty simplex")
            by_dim[len(t) - 1].add(t)
        top = max(by_dim)
        self.simplices: tuple[tuple[Simplex, ...], ...] = tuple(
            tuple(sorted(by_dim[d], key=self.sort_key)) for d in range(top + 1)
        )
        self._set = frozenset(frozenset(s) for dim in self.simplices for s in dim)
        for dim in self.simplices[1:]:
            for s in dim:
                for k in range(len(s)):
                    if frozenset(s[:k] + s[k + 1 :]) not in self._set:
                        raise InvalidComplexError(f"face of {s} missing: not downward closed")
        self._cache: dict = {}

    # -- basic queries ---------------------------------------------------

    def canonical(self, vs: Iterable[Vertex]) -> Simplex:
        try:
            return tuple(sorted(set(vs), key=self._pos.__getitem__))
        except KeyError as exc:
            raise InvalidComplexError(f"unknown vertex {exc.args[0]!r}") from None

    def sort_key(self, t: Sequence[Vertex]) -> tuple[int, ...]:
        return tuple(self._pos[v] for v in t)

    def position(self, v: Vertex) -> int:
        return self._pos[v]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d <= self.dim else 0

    def is_simplex(self, vs: Iterable[Vertex]) -> bool:
        return frozenset(vs) in self._set

    def all_simplices(self) -> Iterable[Simplex]:
        for dim in self.simplices:
            yield from dim

    @property
    def facets(self) -> tuple[Simplex, ...]:
        if "facets" not in self._cache:
            covered = set()
            for dim in self.simplices[1:]:
                for s in dim:
                    for k in range(len(s)):
                        covered.add(s[:k] + s[k + 1 :])
            out = [s for s in self.all_simplices() if s not in covered]
            self._cache["facets"] = tuple(sorted(out, key=self.sort_key))
        return self._cache["facets"]

    def index(self, d: int) -> dict[Simplex, int]:
        key = ("index", d)
        if key not in self._cache:
            self._cache[key] = {s: i for i, s in enumerate(self.simplices[d] if 0 <= d <= self.dim else ())}
        return self._cache[key]

    def extension_vertices(self, s: frozenset) -> tuple:
        """Vertices ``w`` (including those of ``s``) with ``s + {w}`` a simplex."""
        ext = self._cache.setdefault("ext", {})
        if s not in ext:
            cof = self._cache.get("cofaces")
            if cof is None:
                cof = defaultdict(set)
                for dim in self.simplices[1:]:
                    for t in dim:
                        for k, w in enumerate(t):
                            cof[frozenset(t[:k] + t[k + 1 :])].add(w)
                self._cache["cofaces"] = cof
            ext[s] = tuple(sorted(s | cof.get(s, set()), key=self._pos.__getitem__))
        return ext[s]

    def algebraic_simplices(self, q: int) -> tuple[AlgebraicSimplex, ...]:
        """All ordered ``(q+1)``-tuples whose underlying set is a simplex."""
        key = ("alg", q)
        if key not in self._cache:
            out = []
            if q >= 0:
                for dim in self.simplices[: q + 1]:
                    for s in dim:
                        need = set(s)
                        out.extend(t for t in itertools.product(s, repeat=q + 1) if set(t) == need)
            out.sort(key=self.sort_key)
            self._cache[key] = tuple(out)
        return self._cache[key]

    def subcomplex(self, simplices: Iterable[Iterable[Vertex]]) -> "SimplicialComplex":
        """Complex spanned by ``simplices`` (closed downward), keeping the vertex order."""
        sims = [self.canonical(s) for s in simplices]
        used = {v for s in sims for v in s}
        faces = set()
        for s in sims:
            for r in range(1, len(s) + 1):
                faces.update(itertools.combinations(s, r))
        return SimplicialComplex([v for v in self.vertices if v in used], faces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self is other or (self.vertices == other.vertices and self.simplices == other.simplices)

    def __hash__(self) -> int:
        return hash((self.vertices, self.simplices))

    def __repr__(self) -> str:
        counts = ", ".join(str(len(d)) for d in self.simplices)
        return f"SimplicialComplex(vertices={len(self.vertices)}, f-vector=({counts}))"


def close_downward(facets: Iterable[Iterable[Vertex]], order: Sequence[Vertex]) -> SimplicialComplex:
    """Smallest simplicial complex on ``order`` containing every facet."""
    known = set(order)
    faces = set()
    for f in facets:
        f = tuple(f)
        if not f:
            raise InvalidComplexError("empty facet")
        for v in f:
            if v not in known:
                raise InvalidComplexError(f"facet {list(f)} references unknown vertex {v!r}")
        f = tuple(set(f))
        for r in range(1, len(f) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(f, r))
    return SimplicialComplex(order, faces)


@lru_cache(maxsize=None)
def signed_permutations(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = []
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        out.append((perm, -1 if inversions % 2 else 1))
    return tuple(out)


def sort_sign(t: Sequence, key) -> int:
    """Sign of the permutation sorting ``t``; 0 when ``t`` has repeats."""
    keys = [key(v) for v in t]
    if len(set(keys)) != len(keys):
        return 0
    inversions = sum(1 for i in range(len(keys)) for j in range(i + 1, len(keys)) if keys[i] > keys[j])
    return -1 if inversions % 2 else 1


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """A degree-``p`` cochain: sparse map from algebraic ``p``-simplices to scalars."""

    __slots__ = ("complex", "degree", "ring", "values")

    def __init__(
        self,
        complex: SimplicialComplex,
        degree: int,
        values: Mapping[AlgebraicSimplex, object] | Iterable | None = None,
        ring: RingSpec = QQ,
        *,
        check: bool = True,
    ):
        self.complex = complex
        self.degree = degree
        self.ring = ring
        items = values.items() if isinstance(values, Mapping) else (values or ())
        clean = {}
        for t, v in items:
            t = tuple(t)
            v = ring.coerce(v)
            if not v:
                continue
            if check:
                if len(t) != degree + 1:
                    raise DimensionMismatchError(f"key {t} does not have degree {degree}")
                if not complex.is_simplex(t):
                    raise InvalidComplexError(f"{t} is not an algebraic simplex of the complex")
            clean[t] = v
        self.values = clean

    @classmethod
    def zero(cls, complex: SimplicialComplex, degree: int, ring: RingSpec = QQ) -> "Cochain":
        return cls(complex, degree, None, ring)

    @classmethod
    def constant(cls, complex: SimplicialComplex, value=1, ring: RingSpec = QQ) -> "Cochain":
        return cls(complex, 0, {(v,): value for v in complex.vertices}, ring)

    @classmethod
    def indicator(cls, complex: SimplicialComplex, key: AlgebraicSimplex, ring: RingSpec = QQ) -> "Cochain":
        return cls(complex, len(key) - 1, {tuple(key): 1}, ring)

    def __getitem__(self, t: AlgebraicSimplex):
        return self.values.get(tuple(t), self.ring.zero)

    def items(self):
        return self.values.items()

    def is_zero(self) -> bool:
        return not self.values

    def on(self, complex: SimplicialComplex) -> "Cochain":
        """The same cochain viewed on a structurally equal complex."""
        if complex != self.complex:
            raise InvalidComplexError("complexes differ")
        return Cochain(complex, self.degree, self.values, self.ring, check=False)

    def _combine(self, other: "Cochain", sign: int) -> "Cochain":
        if self.degree != other.degree or self.ring != other.ring or self.complex != other.complex:
            raise DimensionMismatchError("cochains live in different spaces")
        acc = defaultdict(int, self.values)
        for t, v in other.values.items():
            acc[t] += sign * v
        return Cochain(self.complex, self.degree, acc, self.ring, check=False)

    def __add__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, 1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, -1)

    def __neg__(self) -> "Cochain":
        return Cochain(self.complex, self.degree, {t: -v for t, v in self.values.items()}, self.ring, check=False)

    def __rmul__(self, scalar) -> "Cochain":
        return Cochain(self.complex, self.degree, {t: scalar * v for t, v in self.values.items()}, self.ring, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.ring == other.ring
            and self.complex == other.complex
            and self.values == other.values
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, ring={self.ring}, support={len(self.values)})"


def coboundary(c: Cochain) -> Cochain:
    """``(dc)(i_0..i_{p+1}) = sum_k (-1)^k c(i_0..^i_k..i_{p+1})`` on algebraic simplices."""
    K = c.complex
    out: dict = defaultdict(int)
    for t, v in c.values.items():
        for w in K.extension_vertices(frozenset(t)):
            for k in range(len(t) + 1):
                out[t[:k] + (w,) + t[k:]] += v if k % 2 == 0 else -v
    return Cochain(K, c.degree + 1, out, c.ring, check=False)


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero()


def alternation(c: Cochain) -> Cochain:
    """Signed-sort projection onto alternating cochains.

    The value on a repeat-free tuple is the sign of its sorting permutation
    times the value of ``c`` on the sorted tuple; tuples with repeats get 0.
    """
    K = c.complex
    out = {}
    for t, v in c.values.items():
        if len(set(t)) != len(t) or K.canonical(t) != t:
            continue
        for perm, sign in signed_permutations(len(t)):
            out[tuple(t[i] for i in perm)] = v if sign > 0 else -v
    return Cochain(K, c.degree, out, c.ring, check=False)


def is_alternating(c: Cochain) -> bool:
    return alternation(c) == c


class SimplicialMap:
    """A vertex map sending every simplex of ``source`` onto a simplex of ``target``."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Mapping, *, check=True):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        if check:
            for v in source.vertices:
                if v not in self.vertex_map:
                    raise InvalidComplexError(f"vertex {v!r} is not mapped")
                if self.vertex_map[v] not in target._pos:
                    raise InvalidComplexError(f"{v!r} maps to unknown vertex {self.vertex_map[v]!r}")
            for s in source.facets:
                if not target.is_simplex(self.vertex_map[v] for v in s):
                    raise InvalidComplexError(f"image of {s} is not a simplex of the target")

    def __call__(self, v: Vertex) -> Vertex:
        return self.vertex_map[v]

    def image(self, s: Iterable[Vertex]) -> Simplex:
        return self.target.canonical(self.vertex_map[v] for v in s)

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """``self o inner``."""
        if inner.target != self.source:
            raise InvalidComplexError("maps are not composable")
        return SimplicialMap(
            inner.source, self.target, {v: self.vertex_map[w] for v, w in inner.vertex_map.items()}, check=False
        )

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices}, check=False)


def pullback(f: SimplicialMap, c: Cochain) -> Cochain:
    """``(f^* c)(i_0..i_p) = c(f(i_0)..f(i_p))``."""
    if c.complex != f.target:
        raise InvalidComplexError("cochain does not live on the target of the map")
    vm = f.vertex_map
    vals = c.values
    out = {}
    if vals:
        for t in f.source.algebraic_simplices(c.degree):
            v = vals.get(tuple(vm[x] for x in t))
            if v:
                out[t] = v
    return Cochain(f.source, c.degree, out, c.ring, check=False)


# ---------------------------------------------------------------------------
# matrices and cohomology


def coboundary_matrix(K: SimplicialComplex, p: int, ring: RingSpec) -> SparseMatrix:
    """Alternating coboundary ``C^p -> C^{p+1}`` in the increasing-order basis."""
    key = ("cobmat", p, ring)
    if key not in K._cache:
        rows, cols = K.count(p + 1), K.count(p)
        entries = []
        if p >= 0 and rows:
            col_index = K.index(p)
            for i, s in enumerate(K.simplices[p + 1]):
                for k in range(len(s)):
                    entries.append(((i, col_index[s[:k] + s[k + 1 :]]), -1 if k % 2 else 1))
        K._cache[key] = SparseMatrix.build(rows, cols, entries, ring)
    return K._cache[key]


def ordered_coboundary_matrix(K: SimplicialComplex, p: int, ring: RingSpec) -> SparseMatrix:
    """Coboundary ``C^p -> C^{p+1}`` on all algebraic simplices (repeats included)."""
    cols = K.algebraic_simplices(p)
    rows = K.algebraic_simplices(p + 1)
    row_index = {t: i for i, t in enumerate(rows)}
    entries = []
    for j, t in enumerate(cols):
        for u, v in coboundary(Cochain(K, p, {t: 1}, ring, check=False)).items():
            entries.append(((row_index[u], j), v))
    return SparseMatrix.build(len(rows), len(cols), entries, ring)


def alternating_vector(c: Cochain) -> list:
    """Coordinates of ``alternation(c)`` in the increasing-order basis."""
    return [c[s] for s in c.complex.simplices[c.degree]] if 0 <= c.degree <= c.complex.dim else []


def alternating_cochain(K: SimplicialComplex, p: int, vector: Sequence, ring: RingSpec) -> Cochain:
    base = Cochain(K, p, {s: v for s, v in zip(K.simplices[p], vector) if v}, ring, check=False)
    return alternation(base)


def cohomology(K: SimplicialComplex, ring: RingSpec, degree: int) -> CohomologyPresentation:
    """``H^degree(K; ring)`` with alternating representative cocycles.

    Representatives are normalized (leading coordinate 1 over a field,
    positive over Z). :meth:`CohomologyPresentation.coordinates` accepts any
    ordered cocycle.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    key = ("coh", degree, ring)
    if key in K._cache:
        return K._cache[key]
    n = K.count(degree)
    d_out = coboundary_matrix(K, degree, ring)
    if d_out.cols != n:
        d_out = SparseMatrix.zeros(0, n, ring)
    d_in = coboundary_matrix(K, degree - 1, ring) if degree > 0 else SparseMatrix.zeros(n, 0, ring)
    if d_in.rows != n:
        d_in = SparseMatrix.zeros(n, 0, ring)
    pres = cohomology_at(d_out, d_in, ring)
    reps = [alternating_cochain(K, degree, vec, ring) for vec in pres.representatives]

    def encode(z: Cochain) -> list:
        if z.degree != degree or z.complex != K:
            raise DimensionMismatchError("cochain is not in this cohomology group's cochain space")
        if not is_cocycle(z):
            raise NotACocycleError("not a cocycle")
        return [ring.reduce(x) for x in alternating_vector(z)]

    result = pres.with_representatives(reps, encode)
    K._cache[key] = result
    return result


def betti_numbers(K: SimplicialComplex, ring: RingSpec) -> list[int]:
    return [cohomology(K, ring, p).free_rank for p in range(K.dim + 1)]


def _coboundary_solver(K: SimplicialComplex, p: int, ring: RingSpec, ordered: bool) -> SpanSolver:
    key = ("solver", p, ring, ordered)
    if key not in K._cache:
        if ordered:
            m = ordered_coboundary_matrix(K, p - 1, ring) if p > 0 else SparseMatrix.zeros(
                len(K.algebraic_simplices(p)), 0, ring
            )
        else:
            m = coboundary_matrix(K, p - 1, ring) if p > 0 else SparseMatrix.zeros(K.count(p), 0, ring)
            if m.rows != K.count(p):
                m = SparseMatrix.zeros(K.count(p), 0, ring)
        K._cache[key] = SpanSolver(m)
    return K._cache[key]


def class_equal(
    z1: Cochain,
    z2: Cochain,
    K: SimplicialComplex | None = None,
    ring: RingSpec | None = None,
    p: int | None = None,
    *,
    ordered: bool = False,
) -> bool:
    """Whether two cocycles represent the same cohomology class.

    By default the difference is alternated and tested against the
    alternating coboundaries; ``ordered=True`` tests against the coboundary
    of the full ordered complex instead.
    """
    K = K if K is not None else z1.complex
    ring = ring if ring is not None else z1.ring
    p = p if p is not None else z1.degree
    for z in (z1, z2):
        if z.complex != K or z.ring != ring or z.degree != p:
            raise DimensionMismatchError("cochain does not match the given complex, ring or degree")
        if not is_cocycle(z):
            raise NotACocycleError("class_equal needs cocycles")
    diff = z1 - z2
    if diff.is_zero():
        return True
    solver = _coboundary_solver(K, p, ring, ordered)
    if ordered:
        vec = [diff[t] for t in K.algebraic_simplices(p)]
    else:
        vec = alternating_vector(diff)
    return solver.solve(vec) is not None
