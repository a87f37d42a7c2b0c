"""End-to-end verification pipelines and their JSON reports.

Each pipeline walks a cohomology basis of the nerve and, for every basis
cocycle, compares two cochains that should agree (exactly or in
cohomology). Results are collected in a :class:`VerificationReport` whose
JSON form is deterministic: timings are measured but only serialized on
request.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from .complexes import (
    Cochain,
    SimplicialComplex,
    SimplicialMap,
    alternation,
    class_equal,
    cohomology,
    is_cocycle,
    pullback,
)
from .covers import StarCover, star_cover
from .errors import PreconditionError
from .linalg import is_isomorphism
from .mv_complex import MayerVietoris, choice_rule, small_subcomplex
from .rings import RingSpec
from .subdivision import comparison_pullback, subdivided_map

SCHEMA = 1


# ---------------------------------------------------------------------------
# reports


def serialize_cochain(c: Cochain) -> list:
    """``[[key, "a/b"], ...]`` in the complex's key order."""
    items = sorted(c.values.items(), key=lambda kv: c.complex.sort_key(kv[0]))
    return [[list(t), c.ring.format(v)] for t, v in items]


@dataclass
class ClassResult:
    index: int
    checks: dict[str, bool]
    witness: list | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"index": self.index, "passed": self.passed, "checks": dict(self.checks)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class DegreeResult:
    degree: int
    basis_size: int
    results: list[ClassResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "degree": self.degree,
            "basis_size": self.basis_size,
            "passed": self.passed,
            "classes": [r.to_dict() for r in self.results],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class VerificationReport:
    pipeline: str
    ring: str
    config: dict = field(default_factory=dict)
    degrees: list[DegreeResult] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(d.passed for d in self.degrees) and all(self.checks.values())

    def degree(self, p: int) -> DegreeResult:
        for d in self.degrees:
            if d.degree == p:
                return d
        raise KeyError(p)

    def to_dict(self, include_timings: bool = False) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA,
            "pipeline": self.pipeline,
            "ring": self.ring,
            "passed": self.passed,
            "config": self.config,
            "degrees": [d.to_dict() for d in self.degrees],
        }
        if self.checks:
            out["checks"] = dict(self.checks)
        if self.data:
            out["data"] = self.data
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2)


class _Clock:
    def __init__(self, report: VerificationReport):
        self.report = report

    def __call__(self, name: str):
        report = self.report

        class _Span:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                report.timings[name] = report.timings.get(name, 0.0) + time.perf_counter() - self.t0

        return _Span()


def _compare(index: int, z1: Cochain, z2: Cochain, exact: bool = False) -> ClassResult:
    """Class (and optionally cochain) equality with the difference as witness on failure."""
    checks = {}
    if exact:
        checks["cochain_equal"] = z1 == z2
    checks["class_equal"] = class_equal(z1, z2)
    failed = not all(checks.values())
    return ClassResult(index, checks, serialize_cochain(z1 - z2) if failed else None)


def _degrees(K: SimplicialComplex, max_degree: int | None) -> range:
    top = K.dim if max_degree is None else min(K.dim, max_degree)
    return range(top + 1)


# ---------------------------------------------------------------------------
# pipelines


def run_prop_star(K: SimplicialComplex, ring: RingSpec, max_degree: int | None = None, rule: str = "vertex") -> VerificationReport:
    """Open-star cover at level 1: the zigzag lift against the max-vertex pullback.

    For every alternating basis cocycle ``phi`` of ``H^p(K)`` (the nerve of
    the open-star cover is ``K`` itself) checks (a) the exact cochain
    equality ``zeta~(phi) = g^* phi`` and (b) that ``zeta~(phi)`` is
    cohomologous to the level-1 comparison image of ``phi``.
    """
    report = VerificationReport("prop-star", str(ring), {"level": 1, "choice_rule": rule})
    clock = _Clock(report)
    cover = star_cover(K)
    N = cover.nerve()
    report.checks["nerve_is_complex"] = N == K
    mv = MayerVietoris(cover, 1, ring)
    chooser = choice_rule(rule, cover, 1)
    g = cover.tower.approximation(0)
    for p in _degrees(K, max_degree):
        with clock(f"cohomology_{p}"):
            H = cohomology(N, ring, p)
        deg = DegreeResult(p, H.ngens)
        for k, phi in enumerate(H.representatives):
            with clock(f"zeta_{p}"):
                z = mv.zeta_cochain(phi, chooser)
            lemma = pullback(g, phi.on(K))
            comparison = comparison_pullback(cover.tower, 0, 1, phi.on(K))
            with clock(f"compare_{p}"):
                checks = {"lemma_exact": z == lemma, "class_equal": class_equal(z, comparison)}
            witness = None
            if not checks["lemma_exact"]:
                witness = serialize_cochain(z - lemma)
            elif not checks["class_equal"]:
                witness = serialize_cochain(z - comparison)
            deg.results.append(ClassResult(k, checks, witness))
        report.degrees.append(deg)
    return report


def eta_representatives(cover: StarCover, ring: RingSpec, rule: str = "default", max_degree: int | None = None):
    """``(level, [(degree, [zeta~(phi) for phi in basis])])`` at the smallness level."""
    r = cover.smallness_level()
    mv = MayerVietoris(cover, r, ring)
    chooser = choice_rule(rule, cover, r)
    N = cover.nerve()
    out = []
    for p in _degrees(N, max_degree):
        reps = cohomology(N, ring, p).representatives
        out.append((p, [mv.zeta_cochain(alternation(phi), chooser) for phi in reps]))
    return r, out


def fstar_representatives(cover: StarCover, ring: RingSpec, tie_break: str = "min", max_degree: int | None = None):
    """``(level, [(degree, [f^* phi for phi in basis])])`` at the approximation level."""
    r, _ = cover.f_star_approximation(tie_break)
    N = cover.nerve()
    out = []
    for p in _degrees(N, max_degree):
        reps = cohomology(N, ring, p).representatives
        out.append((p, [cover.f_star(phi, r, tie_break) for phi in reps]))
    return r, out


def run_main_theorem(
    cover: StarCover,
    ring: RingSpec,
    rule: str = "default",
    tie_break: str = "min",
    max_degree: int | None = None,
) -> VerificationReport:
    """Compare the zigzag map with the pullback along the partition-of-unity map, class by class.

    With ``r`` the smallness level, ``r'`` the level of the simplicial
    approximation and ``L = max(r, r')``, checks for each basis cocycle
    ``phi`` of the nerve that ``zeta~(alt phi)`` pulled to level ``L`` is
    cohomologous to ``f^* phi`` at level ``L``.
    """
    K = cover.base
    r = cover.smallness_level()
    r_approx, _ = cover.f_star_approximation(tie_break)
    L = max(r, r_approx)
    config = {"r": r, "r_prime": r_approx, "L": L, "choice_rule": rule, "tie_break": tie_break, "cover": repr(cover)}
    report = VerificationReport("main", str(ring), config)
    clock = _Clock(report)
    mv = MayerVietoris(cover, r, ring)
    chooser = choice_rule(rule, cover, r)
    N = cover.nerve()
    for p in range(max(N.dim, K.dim) + 1 if max_degree is None else max_degree + 1):
        source = cohomology(N, ring, p) if p <= N.dim else None
        target = cohomology(K, ring, p) if p <= K.dim else None
        deg = DegreeResult(p, source.ngens if source else 0)
        if target is not None:
            deg.notes.append(f"target group has {target.free_rank} free and {len(target.torsion)} torsion generators")
        if deg.basis_size == 0 and target is not None and target.ngens:
            deg.notes.append(f"H^{p} of the space is not reached from the nerve")
        for k, phi in enumerate(source.representatives if source else ()):
            with clock(f"eta_{p}"):
                eta = comparison_pullback(cover.tower, r, L, mv.zeta_cochain(alternation(phi), chooser))
            with clock(f"fstar_{p}"):
                fs = cover.f_star(phi, L, tie_break)
            with clock(f"compare_{p}"):
                deg.results.append(_compare(k, eta, fs))
        report.degrees.append(deg)
    return report


def run_choice_independence(cover: StarCover, ring: RingSpec, rules=("min", "max"), max_degree: int | None = None) -> VerificationReport:
    """The zigzag lifts under every rule in ``rules`` are cohomologous to the lift under the first."""
    r = cover.smallness_level()
    report = VerificationReport("choice-independence", str(ring), {"r": r, "rules": list(rules), "cover": repr(cover)})
    mv = MayerVietoris(cover, r, ring)
    first, *others = (choice_rule(name, cover, r) for name in rules)
    N = cover.nerve()
    for p in _degrees(N, max_degree):
        H = cohomology(N, ring, p)
        deg = DegreeResult(p, H.ngens)
        for k, phi in enumerate(H.representatives):
            base = mv.zeta_cochain(phi, first)
            result = ClassResult(k, {})
            for rule in others:
                other = mv.zeta_cochain(phi, rule)
                ok = result.checks[f"{first.name}~{rule.name}"] = class_equal(base, other)
                if not ok and result.witness is None:
                    result.witness = serialize_cochain(base - other)
            deg.results.append(result)
        report.degrees.append(deg)
    return report


def check_containment(h: SimplicialMap, cover_v: StarCover, cover_w: StarCover) -> None:
    """Raise unless ``h(V_i)`` lies in ``W_i`` for every index ``i`` of ``cover_v``.

    ``V_i`` is the union of open stars of ``A^V_i`` and ``h`` is linear on
    simplices, so the containment holds exactly when ``h`` maps ``A^V_i``
    into ``A^W_i``: a point of ``st(a)`` goes to a point with positive
    coordinate at ``h(a)``, and ``a`` itself goes to the vertex ``h(a)``.
    """
    if h.source != cover_v.base or h.target != cover_w.base:
        raise PreconditionError("covers must live on the source and target of the map")
    for i in cover_v.index_set:
        if i not in cover_w.sets:
            raise PreconditionError(f"index {i!r} of the source cover has no counterpart in the target cover")
        for a in sorted(cover_v.sets[i], key=cover_v.base.position):
            if h(a) not in cover_w.sets[i]:
                raise PreconditionError(
                    f"containment fails for index {i!r}: vertex {a!r} maps to {h(a)!r}, outside the target set"
                )


def run_naturality(h: SimplicialMap, cover_v: StarCover, cover_w: StarCover, ring: RingSpec, rule: str = "default") -> VerificationReport:
    """Naturality of the zigzag map under a simplicial map compatible with the covers.

    For each basis cocycle ``phi`` on the target nerve compares, at level
    ``R = max(r_V, r_W)`` of the source, the pullback along the subdivided
    map of ``eta_W(phi)`` with ``eta_V(N(h)^* phi)``, where ``N(h)`` is the
    identity on indices.
    """
    check_containment(h, cover_v, cover_w)
    r_v, r_w = cover_v.smallness_level(), cover_w.smallness_level()
    R = max(r_v, r_w)
    config = {"r_source": r_v, "r_target": r_w, "R": R, "choice_rule": rule}
    report = VerificationReport("naturality", str(ring), config)
    Nv, Nw = cover_v.nerve(), cover_w.nerve()
    nerve_map = SimplicialMap(Nv, Nw, {i: i for i in Nv.vertices})
    mv_v, mv_w = MayerVietoris(cover_v, r_v, ring), MayerVietoris(cover_w, r_w, ring)
    rule_v, rule_w = choice_rule(rule, cover_v, r_v), choice_rule(rule, cover_w, r_w)
    h_R = subdivided_map(h, cover_v.tower, cover_w.tower, R)
    for p in _degrees(Nw, None):
        H = cohomology(Nw, ring, p)
        deg = DegreeResult(p, H.ngens)
        for k, phi in enumerate(H.representatives):
            eta_w = comparison_pullback(cover_w.tower, r_w, R, mv_w.zeta_cochain(phi, rule_w))
            left = pullback(h_R, eta_w)
            eta_v = mv_v.zeta_cochain(pullback(nerve_map, phi), rule_v)
            right = comparison_pullback(cover_v.tower, r_v, R, eta_v)
            deg.results.append(_compare(k, left, right))
        report.degrees.append(deg)
    return report


def run_star_structure(K: SimplicialComplex, ring: RingSpec, max_degree: int | None = None) -> VerificationReport:
    """Open-star cover at level 1: acyclic small subcomplexes and invertible zeta.

    Every nondegenerate index tuple (a simplex of the nerve) must have a
    small subcomplex with the cohomology of a point, and the map on
    cohomology induced by the zigzag lift must be an isomorphism in each
    degree.
    """
    report = VerificationReport("star-structure", str(ring), {"level": 1})
    cover = star_cover(K)
    N = cover.nerve()
    for s in N.all_simplices():
        sub = small_subcomplex(cover, 1, s)
        ok = all(
            (cohomology(sub, ring, p).free_rank, cohomology(sub, ring, p).torsion) == ((1, ()) if p == 0 else (0, ()))
            for p in range(sub.dim + 1)
        )
        report.checks[f"point_cohomology{list(s)}"] = ok
    mv = MayerVietoris(cover, 1, ring)
    chooser = choice_rule("default", cover, 1)
    level = cover.tower.complex(1)
    for p in _degrees(K, max_degree):
        source, target = cohomology(N, ring, p), cohomology(level, ring, p)
        images = []
        for phi in source.representatives:
            z = mv.zeta_cochain(phi, chooser)
            if not is_cocycle(z):
                raise PreconditionError("zigzag lift of a cocycle is not a cocycle")
            images.append(list(target.coordinates(z)))
        report.checks[f"zeta_isomorphism_degree_{p}"] = is_isomorphism(images, source, target)
        report.degrees.append(DegreeResult(p, source.ngens))
    return report
