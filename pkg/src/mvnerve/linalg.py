"""Exact sparse linear algebra over Q, F_p and Z.

Fields use reduced row echelon forms (sparse rows over Q, the compiled
kernel over F_p). The integers use a Smith normal form with tracked
unimodular transforms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, InvalidComplexError, NotACocycleError
from .rings import PRIME_FIELD, QQ, RingSpec


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """A ``rows x cols`` matrix stored as ``{(row, col): nonzero scalar}``."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object]
    ring: RingSpec

    @classmethod
    def build(cls, rows: int, cols: int, entries, ring: RingSpec) -> "SparseMatrix":
        """Accumulate ``((i, j), value)`` pairs (or a dict), reduce, drop zeros."""
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[tuple[int, int], object] = defaultdict(int)
        for (i, j), v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            acc[i, j] += v
        clean = {}
        for key, v in acc.items():
            v = ring.coerce(v)
            if v:
                clean[key] = v
        return cls(rows, cols, clean, ring)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], ring: RingSpec, cols: int | None = None):
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        return cls.build(
            rows, cols, (((i, j), v) for i, row in enumerate(dense) for j, v in enumerate(row) if v), ring
        )

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence, ring: RingSpec) -> "SparseMatrix":
        """Columns given as dense sequences or sparse ``{row: value}`` dicts."""
        pairs = []
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, Mapping) else enumerate(col)
            pairs.extend(((i, j), v) for i, v in items if v)
        return cls.build(rows, len(columns), pairs, ring)

    @classmethod
    def identity(cls, n: int, ring: RingSpec) -> "SparseMatrix":
        return cls(n, n, {(i, i): ring.one for i in range(n)}, ring)

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: RingSpec) -> "SparseMatrix":
        return cls(rows, cols, {}, ring)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> list[list]:
        out = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict[int, object]]:
        out: list[dict[int, object]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list:
        out = [self.ring.zero] * self.rows
        for (i, jj), v in self.entries.items():
            if jj == j:
                out[i] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}, self.ring)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vec)} against {self.cols} columns")
        out = [self.ring.zero] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return [self.ring.reduce(x) for x in out]

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return self.apply(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        other_rows = other.row_dicts()
        acc: dict[tuple[int, int], object] = defaultdict(int)
        for (i, k), a in self.entries.items():
            for j, b in other_rows[k].items():
                acc[i, j] += a * b
        return SparseMatrix.build(self.rows, other.cols, acc, self.ring)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        acc = defaultdict(int, self.entries)
        for key, v in other.entries.items():
            acc[key] += v
        return SparseMatrix.build(self.rows, self.cols, acc, self.ring)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix.build(self.rows, self.cols, {k: -v for k, v in self.entries.items()}, self.ring)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and dict(self.entries) == dict(other.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def hstack(self, *others: "SparseMatrix") -> "SparseMatrix":
        entries = dict(self.entries)
        offset = self.cols
        for m in others:
            if m.rows != self.rows:
                raise DimensionMismatchError("hstack needs equal row counts")
            entries.update({(i, j + offset): v for (i, j), v in m.entries.items()})
            offset += m.cols
        return SparseMatrix(self.rows, offset, entries, self.ring)

    def over(self, ring: RingSpec) -> "SparseMatrix":
        """Reinterpret the (integral or rational) entries in another ring."""
        return SparseMatrix.build(self.rows, self.cols, {k: ring.coerce(v) for k, v in self.entries.items()}, ring)


# ---------------------------------------------------------------------------
# fields: reduced row echelon forms


def _rref_sparse(rows: list[dict[int, object]], ring: RingSpec) -> tuple[list[dict], list[int]]:
    pivot_rows: dict[int, dict[int, object]] = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        for c in [c for c in row if c in pivot_rows]:
            f = row.get(c)
            if not f:
                continue
            for cc, pv in pivot_rows[c].items():
                nv = ring.reduce(row.get(cc, 0) - f * pv)
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        if not row:
            continue
        lead = min(row)
        inv = ring.inverse(row[lead])
        row = {c: ring.reduce(v * inv) for c, v in row.items()}
        for prow in pivot_rows.values():
            f = prow.get(lead)
            if f:
                for cc, v in row.items():
                    nv = ring.reduce(prow.get(cc, 0) - f * v)
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivot_rows[lead] = row
    pivots = sorted(pivot_rows)
    return [pivot_rows[c] for c in pivots], pivots


def _rref_mod_p(rows: list[dict[int, object]], ncols: int, p: int) -> tuple[list[dict], list[int]]:
    if not rows or not ncols:
        return [], []
    if p < kernels.COMPILED_PRIME_LIMIT:
        a = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, v in row.items():
                a[i, j] = v
        pivots = kernels.rref_mod_p(a, p)
        out = []
        for i in range(len(pivots)):
            nz = np.flatnonzero(a[i])
            out.append({int(j): int(a[i, j]) for j in nz})
        return out, list(pivots)
    dense = [[0] * ncols for _ in rows]
    for i, row in enumerate(rows):
        for j, v in row.items():
            dense[i][j] = v
    pivots = kernels._kernels_py.rref_mod_p(dense, p)
    return [{j: v for j, v in enumerate(dense[i]) if v} for i in range(len(pivots))], pivots


def rref(m: SparseMatrix) -> tuple[list[dict[int, object]], list[int]]:
    """Reduced row echelon form of ``m`` over its field.

    Returns the nonzero rows (as ``{col: value}``, sorted by pivot) and the
    pivot columns. The leading entry of each row is 1.
    """
    if not m.ring.is_field:
        raise ValueError("rref needs a field; use smith_normal_form over Z")
    if m.ring.kind == PRIME_FIELD:
        return _rref_mod_p(m.row_dicts(), m.cols, m.ring.p)
    return _rref_sparse(m.row_dicts(), m.ring)


def rank(m: SparseMatrix) -> int:
    if not m.ring.is_field:
        m = m.over(QQ)
    return len(rref(m)[1])


def nullspace(m: SparseMatrix) -> list[list]:
    """Basis of ``{x : m x = 0}`` over a field, one vector per free column."""
    rows, pivots = rref(m)
    ring = m.ring
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        x = [ring.zero] * m.cols
        x[free] = ring.one
        for row, pc in zip(rows, pivots):
            v = row.get(free)
            if v:
                x[pc] = ring.reduce(-v)
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------
# integers: Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(a: list[list[int]], ncols: int | None = None, track: str = "UV"):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Tracks any of ``U``, ``V`` (with ``U a V = D``) and their inverses
    ``Ui``, ``Vi`` as named in ``track``. Pivots are the smallest-magnitude
    nonzero entry of the remaining block; a divisibility fix-up makes the
    diagonal a divisor chain.
    """
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if m else 0)
    A = [list(map(int, row)) for row in a]
    U = _identity(m) if "U" in track else None
    V = _identity(n) if "V" in track else None
    Ui = _identity(m) if "Ui" in track else None
    Vi = _identity(n) if "Vi" in track else None

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_addmul(dst, src, q):
        # row_dst += q * row_src
        if not q:
            return
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]
        if Ui is not None:
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def col_addmul(dst, src, q):
        # col_dst += q * col_src
        if not q:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
        if Vi is not None:
            vs, vd = Vi[src], Vi[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    row_addmul(i, t, -(A[i][t] // piv))
            for j in range(t + 1, n):
                if A[t][j]:
                    col_addmul(j, t, -(A[t][j] // piv))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_addmul(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
            if Ui is not None:
                for row in Ui:
                    row[t] = -row[t]
        t += 1
    diag = [A[k][k] for k in range(t)]
    return {"D": A, "diag": diag, "rank": t, "U": U, "V": V, "Ui": Ui, "Vi": Vi}


def smith_normal_form(m: SparseMatrix) -> tuple[SparseMatrix, SparseMatrix, SparseMatrix]:
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U m V = D``.

    The diagonal is nonnegative with ``d_1 | d_2 | ...``.
    """
    if m.ring.is_field:
        raise ValueError("smith_normal_form is defined over the integers")
    res = _smith(m.to_dense(), m.cols, track="UV")
    ring = m.ring
    return (
        SparseMatrix.from_dense(res["U"], ring, cols=m.rows),
        SparseMatrix.from_dense(res["D"], ring, cols=m.cols),
        SparseMatrix.from_dense(res["V"], ring, cols=m.cols),
    )


def invariant_factors(m: SparseMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form (all ones over a field)."""
    if m.ring.is_field:
        return [1] * rank(m)
    return _smith(m.to_dense(), m.cols, track="")["diag"]


# ---------------------------------------------------------------------------
# solving


class SpanSolver:
    """Precomputed decision procedure for ``m x = b`` over the ring of ``m``.

    Over a field this keeps the transform ``T`` with ``T m = rref(m)``; over
    the integers it keeps the Smith transforms.
    """

    def __init__(self, m: SparseMatrix):
        self.m = m
        self.ring = m.ring
        if self.ring.is_field:
            rows = m.row_dicts()
            for i, row in enumerate(rows):
                row[m.cols + i] = self.ring.one
            red, pivots = (
                _rref_mod_p(rows, m.cols + m.rows, self.ring.p)
                if self.ring.kind == PRIME_FIELD
                else _rref_sparse(rows, self.ring)
            )
            self._pivots = [c for c in pivots if c < m.cols]
            r = len(self._pivots)
            self._transform = [{c - m.cols: v for c, v in row.items() if c >= m.cols} for row in red]
            self._rank = r
        else:
            res = _smith(m.to_dense(), m.cols, track="UV")
            self._U, self._V, self._diag = res["U"], res["V"], res["diag"]
            self._rank = res["rank"]

    @property
    def rank(self) -> int:
        return self._rank

    def solve(self, b: Sequence) -> list | None:
        m, ring = self.m, self.ring
        if len(b) != m.rows:
            raise DimensionMismatchError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
        b = [ring.reduce(v) for v in b]
        if not any(b):
            return [ring.zero] * m.cols
        if ring.is_field:
            y = [ring.reduce(sum(v * b[j] for j, v in row.items() if b[j])) for row in self._transform]
            if any(y[self._rank:]):
                return None
            x = [ring.zero] * m.cols
            for yi, pc in zip(y, self._pivots):
                x[pc] = yi
            return x
        y = [sum(u * bj for u, bj in zip(urow, b) if bj) for urow in self._U]
        z = [0] * m.cols
        for k, yk in enumerate(y):
            if k < self._rank:
                d = self._diag[k]
                if yk % d:
                    return None
                z[k] = yk // d
            elif yk:
                return None
        return [sum(vrow[k] * z[k] for k in range(self._rank) if z[k]) for vrow in self._V]


def span_membership(m: SparseMatrix, b: Sequence) -> list | None:
    """Some ``x`` with ``m x = b`` over the ring of ``m``, or ``None``."""
    return SpanSolver(m).solve(b)


# ---------------------------------------------------------------------------
# cohomology of a single degree


@dataclass(frozen=True)
class CohomologyPresentation:
    """``ker d_out / im d_in`` as free rank plus invariant factors.

    ``representatives`` lists torsion generators first (orders given by
    ``torsion``) and then free generators. :meth:`coordinates` expresses a
    cocycle in these generators; torsion coordinates are reduced modulo the
    order.
    """

    ring: RingSpec
    free_rank: int
    torsion: tuple[int, ...]
    representatives: tuple
    _solve: Callable = field(repr=False, compare=False)
    _encode: Callable = field(default=list, repr=False, compare=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    def coordinates(self, z) -> tuple:
        return self._solve(self._encode(z))

    def with_representatives(self, reps: Sequence, encode: Callable) -> "CohomologyPresentation":
        if len(reps) != len(self.representatives):
            raise ValueError("representative count mismatch")
        return replace(self, representatives=tuple(reps), _encode=encode)


def _normalize_field_vector(vec: list, ring: RingSpec) -> list:
    lead = next(v for v in vec if v)
    inv = ring.inverse(lead)
    return [ring.reduce(v * inv) for v in vec]


def _cohomology_field(d_out: SparseMatrix, d_in: SparseMatrix, ring: RingSpec) -> CohomologyPresentation:
    n = d_in.rows
    ker = nullspace(d_out)
    stacked = d_in.hstack(SparseMatrix.from_columns(n, ker, ring))
    _, pivots = rref(stacked)
    reps = [_normalize_field_vector(ker[c - d_in.cols], ring) for c in pivots if c >= d_in.cols]
    solver = SpanSolver(d_in.hstack(SparseMatrix.from_columns(n, reps, ring)))
    offset = d_in.cols

    def solve(z):
        if len(z) != n:
            raise DimensionMismatchError(f"cochain of length {len(z)}, expected {n}")
        if any(d_out.apply(z)):
            raise NotACocycleError("vector is not in the kernel of the outgoing differential")
        x = solver.solve(z)
        return tuple(x[offset:])

    return CohomologyPresentation(ring, len(reps), (), tuple(reps), solve)


def _cohomology_integers(d_out: SparseMatrix, d_in: SparseMatrix, ring: RingSpec) -> CohomologyPresentation:
    n = d_in.rows
    outer = _smith(d_out.to_dense(), n, track="VVi")
    r, V, Vi = outer["rank"], outer["V"], outer["Vi"]
    k = n - r
    kernel_cols = [[V[i][r + j] for i in range(n)] for j in range(k)]
    din = d_in.to_dense()
    # image of d_in in kernel coordinates: rows r.. of Vi @ d_in
    M = [[sum(Vi[r + a][i] * din[i][c] for i in range(n) if din[i][c]) for c in range(d_in.cols)] for a in range(k)]
    inner = _smith(M, d_in.cols, track="UUi") if k else {"diag": [], "rank": 0, "U": [], "Ui": []}
    U2, U2i, diag, s = inner["U"], inner["Ui"], inner["diag"], inner["rank"]
    gens = [[sum(kernel_cols[a][i] * U2i[a][j] for a in range(k)) for i in range(n)] for j in range(k)]
    for j, g in enumerate(gens):
        lead = next((v for v in g if v), 0)
        if lead < 0:
            gens[j] = [-v for v in g]
            U2[j] = [-v for v in U2[j]]
    keep = [j for j in range(k) if j >= s or diag[j] > 1]
    torsion = tuple(diag[j] for j in keep if j < s)
    reps = tuple(gens[j] for j in keep)

    def solve(z):
        if len(z) != n:
            raise DimensionMismatchError(f"cochain of length {len(z)}, expected {n}")
        if any(d_out.apply(z)):
            raise NotACocycleError("vector is not in the kernel of the outgoing differential")
        c = [sum(Vi[r + a][i] * z[i] for i in range(n) if z[i]) for a in range(k)]
        cc = [sum(U2[j][a] * c[a] for a in range(k) if c[a]) for j in range(k)]
        return tuple(cc[j] % diag[j] if j < s else cc[j] for j in keep)

    return CohomologyPresentation(ring, k - s, torsion, reps, solve)


def cohomology_at(d_out: SparseMatrix, d_in: SparseMatrix, ring: RingSpec | None = None) -> CohomologyPresentation:
    """Cohomology ``ker d_out / im d_in`` at the middle term of ``d_in, d_out``."""
    ring = ring or d_out.ring
    if d_out.cols != d_in.rows:
        raise DimensionMismatchError(f"d_out has {d_out.cols} columns but d_in has {d_in.rows} rows")
    if d_out.ring != ring or d_in.ring != ring:
        d_out, d_in = d_out.over(ring), d_in.over(ring)
    if not (d_out @ d_in).is_zero():
        raise InvalidComplexError("d_out . d_in is nonzero")
    if ring.is_field:
        return _cohomology_field(d_out, d_in, ring)
    return _cohomology_integers(d_out, d_in, ring)


def is_isomorphism(images: Sequence[Sequence], source: CohomologyPresentation, target: CohomologyPresentation) -> bool:
    """Decide whether generator images (target coordinates) define an isomorphism.

    Over a field: a square invertible matrix. Over Z the groups must have the
    same invariants and the map must be onto; finitely generated abelian
    groups are Hopfian, so onto implies injective.
    """
    ring = target.ring
    if len(images) != source.ngens:
        raise DimensionMismatchError("one image per source generator expected")
    if source.orders != target.orders:
        return False
    t = target.ngens
    if t == 0:
        return True
    if ring.is_field:
        return rank(SparseMatrix.from_columns(t, images, ring)) == t
    relations = [[d if i == j else 0 for i in range(t)] for j, d in enumerate(target.torsion)]
    cols = [list(col) for col in images] + relations
    mat = SparseMatrix.from_columns(t, cols, ring)
    diag = invariant_factors(mat)
    return len(diag) == t and all(d == 1 for d in diag)

