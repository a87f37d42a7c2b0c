import pytest

from mvnerve import fixtures as F
from mvnerve.complexes import Cochain, class_equal, cohomology, is_cocycle
from mvnerve.covers import StarCover, star_cover
from mvnerve.errors import DimensionMismatchError, PreconditionError
from mvnerve.mv_complex import (
    ChoiceRule,
    DoubleCochain,
    MayerVietoris,
    choice_rule,
    default_choice_rule,
    small_subcomplex,
)
from mvnerve.rings import GF, QQ, ZZ

# On the hexagon cover_ab at level 1, vertex 7 is the midpoint of edge
# (0, 5) and lies in both sets; vertex 0 lies only in "a".
BOTH = (7,)


@pytest.fixture(scope="module")
def mv_ab():
    return MayerVietoris(F.cover_ab(), 1)


def test_basis_keys(mv_ab):
    assert mv_ab.small(BOTH) == {"a", "b"}
    assert (("a", "b"), BOTH) in mv_ab.basis(1, 0)
    assert (("a", "a"), BOTH) in mv_ab.basis(1, 0)
    assert all(set(t) <= mv_ab.small(s) for t, s in mv_ab.basis(2, 1))
    assert mv_ab.basis(1, -1) == mv_ab.nerve.algebraic_simplices(1)
    with pytest.raises(DimensionMismatchError):
        mv_ab.basis(-1, -1)


def test_delta_h_augmentation(mv_ab):
    out = mv_ab.delta_h(mv_ab.unit(-1, 0, BOTH))
    assert out.bidegree == (0, 0)
    assert out.values == {(("a",), BOTH): 1, (("b",), BOTH): 1}


def test_delta_h_signs(mv_ab):
    # inserting at position 0 gives +, at position 1 gives -; (a, a) cancels
    out = mv_ab.delta_h(mv_ab.unit(0, 0, (("a",), BOTH)))
    assert out.values == {(("b", "a"), BOTH): 1, (("a", "b"), BOTH): -1}


def test_delta_h_on_nerve_column(mv_ab):
    out = mv_ab.delta_h(mv_ab.unit(0, -1, ("a",)))
    assert out.values == {("b", "a"): 1, ("a", "b"): -1}


def test_delta_v_augmentation(mv_ab):
    out = mv_ab.delta_v(mv_ab.unit(0, -1, ("b",)))
    small_in_b = [w for w in mv_ab.complex.vertices if "b" in mv_ab.small((w,))]
    assert out.values == {(("b",), (w,)): 1 for w in small_in_b}


def test_delta_v_filters_by_smallness(mv_ab):
    # edge (0, 7) is small in a, edge (5, 7) only in b
    assert mv_ab.delta_v(mv_ab.unit(0, 0, (("a",), BOTH))).values == {(("a",), (0, 7)): 1, (("a",), (7, 0)): -1}
    assert mv_ab.delta_v(mv_ab.unit(0, 0, (("b",), BOTH))).values == {(("b",), (5, 7)): 1, (("b",), (7, 5)): -1}


def test_total_differential_sign(mv_ab):
    e = mv_ab.unit(1, 0, (("a", "b"), BOTH))
    out = mv_ab.total_differential({(1, 0): e}, 1)
    assert out[(1, 1)] == -mv_ab.delta_v(e)
    assert out[(2, 0)] == mv_ab.delta_h(e)
    with pytest.raises(DimensionMismatchError):
        mv_ab.total_differential({(1, 0): e}, 2)
    capped = mv_ab.total_differential({(1, 0): e}, 1, p_cap=1)
    assert set(capped) == {(1, 1)}


def test_contraction_p0(mv_ab):
    rule = choice_rule("min", mv_ab.cover, 1)
    assert rule(BOTH) == "a"
    assert mv_ab.contraction(mv_ab.unit(0, 0, (("a",), BOTH)), rule).values == {BOTH: 1}
    assert mv_ab.contraction(mv_ab.unit(0, 0, (("b",), BOTH)), rule).is_zero()
    lifted = mv_ab.contraction(mv_ab.unit(1, 0, (("a", "b"), BOTH)), rule)
    assert lifted.bidegree == (0, 0) and lifted.values == {(("b",), BOTH): 1}


def test_contraction_rejects_bad_rule(mv_ab):
    liar = ChoiceRule("liar", lambda s: "b")
    with pytest.raises(PreconditionError):
        mv_ab.contraction(mv_ab.unit(0, 0, (("a",), (0,))), liar)
    with pytest.raises(DimensionMismatchError):
        mv_ab.contraction(mv_ab.unit(-1, 0, (0,)), liar)


def test_choice_rules():
    ab = F.cover_ab()
    assert choice_rule("min", ab, 1)(BOTH) == "a"
    assert choice_rule("max", ab, 1)(BOTH) == "b"
    assert default_choice_rule(ab, 1).name == "min"
    with pytest.raises(PreconditionError):
        choice_rule("vertex", ab, 1)
    with pytest.raises(ValueError):
        choice_rule("coin", ab, 1)
    tri = star_cover(F.triangle_boundary())
    by_vertex = choice_rule("vertex", tri, 1)
    # the edge from vertex 1 to the midpoint of (1, 2) lies in the star of 1
    lvl = tri.tower.level(1)
    mid = next(v for v, s in lvl.parent.items() if s == (1, 2))
    assert by_vertex((1, mid)) == 1
    assert default_choice_rule(tri, 1).name == "vertex"


def test_zeta_of_constant_is_constant(mv_ab):
    one = Cochain.constant(mv_ab.nerve)
    z = mv_ab.zeta_tilde(one)
    assert z.bidegree == (-1, 0)
    assert z.values == {(w,): 1 for w in mv_ab.complex.vertices}


def test_zeta_sign_degree_one():
    # hand computation: delta_v puts (0,1) -> 1 and (1,0) -> -1 at the midpoint m
    # of edge (0, 1). The rule picks 1 at m, so K gives -1 on ((0,), m). Then
    # delta_v reaches only (0, m) (small in U_0), K keeps it, and the sign
    # (-1)^1 flips it: the result is +1 on (0, m) and 0 on (1, m).
    tri = star_cover(F.triangle_boundary())
    mv = MayerVietoris(tri, 1)
    lvl = tri.tower.level(1)
    mid = next(v for v, s in lvl.parent.items() if s == (0, 1))
    N = tri.nerve()
    phi = Cochain(N, 1, {(0, 1): 1, (1, 0): -1})
    z = mv.zeta_cochain(phi)
    assert is_cocycle(z)
    assert z[(0, mid)] == 1 and z[(mid, 0)] == -1
    assert z[(1, mid)] == 0


@pytest.mark.parametrize(
    "make",
    [F.cover_ab, F.cover_abc, F.cover_wide, lambda: star_cover(F.rp2()), lambda: star_cover(F.tetrahedron_boundary())],
)
@pytest.mark.parametrize("ring", [QQ, GF(2), ZZ], ids=str)
def test_zeta_is_a_chain_map(make, ring):
    cover = make()
    mv = MayerVietoris(cover, cover.smallness_level(), ring)
    N = cover.nerve()
    for p in range(N.dim):
        for e in N.algebraic_simplices(p):
            phi = Cochain(N, p, {e: 1}, ring)
            assert mv.zeta_tilde(cover.cech_coboundary(phi)) == mv.delta_v(mv.zeta_tilde(phi))


@pytest.mark.parametrize("make", [F.cover_ab, F.cover_abc, lambda: star_cover(F.rp2())])
def test_complex_axioms(make):
    cover = make()
    for ring in (QQ, GF(3)):
        mv = MayerVietoris(cover, cover.smallness_level(), ring)
        assert mv.check_complex_axioms(3, 2) == []


@pytest.mark.parametrize("rule", ["min", "max"])
def test_row_exactness(mv_ab, rule):
    r = choice_rule(rule, mv_ab.cover, 1)
    for q in range(2):
        report = mv_ab.verify_row_exactness(q, 3, r)
        assert report.passed and report.witness is None
        assert report.checked == [(p, q) for p in range(-1, 4)]
        assert all(report.per_simplex.values())


def test_row_exactness_needs_cap(mv_ab):
    with pytest.raises(PreconditionError):
        mv_ab.verify_row_exactness(0, 4)


def test_corrupted_contraction_is_caught(mv_ab):
    """Reading the chosen index from the end of the tuple breaks the homotopy."""
    rule = choice_rule("min", mv_ab.cover, 1)

    def last_index(c, rule):
        p, q = c.bidegree
        out = {}
        for (t, s), v in c.values.items():
            if t[-1] == rule(s):
                out[(t[:-1], s) if p > 0 else s] = v
        return DoubleCochain(p - 1, q, out, c.ring)

    report = mv_ab.verify_row_exactness(0, 3, rule, contraction=last_index)
    assert not report.passed
    assert report.failure is not None and report.failure[0] >= 0
    assert report.witness is not None and not report.residual.is_zero()
    assert mv_ab.verify_row_exactness(0, 3, rule, contraction=mv_ab.contraction).passed


def test_one_set_cover():
    K = F.rp2()
    cover = StarCover(K, {"X": K.vertices})
    assert cover.smallness_level() == 0 and cover.nerve().count(0) == 1
    mv = MayerVietoris(cover, 0, GF(2))
    for q in range(3):
        assert mv.verify_row_exactness(q, 2).passed
    z = mv.zeta_cochain(Cochain.constant(cover.nerve(), ring=GF(2)))
    assert z == Cochain.constant(K, ring=GF(2))
    assert cohomology(cover.nerve(), GF(2), 1).ngens == 0


def test_small_subcomplex():
    ab = F.cover_ab()
    both = small_subcomplex(ab, 1, ("a", "b"))
    assert both.count(0) == 2 and both.count(1) == 0
    with pytest.raises(PreconditionError):
        small_subcomplex(star_cover(F.triangle_boundary()), 1, (0, 1, 2))


def test_double_cochain_arithmetic():
    a = DoubleCochain(0, 0, {(("a",), (0,)): 3}, GF(2))
    assert a.values == {(("a",), (0,)): 1}
    assert (a + a).is_zero() and (a - a).is_zero()
    assert 2 * a == DoubleCochain(0, 0, {}, GF(2))
    assert a.component(("a",)) == {(0,): 1}
    with pytest.raises(DimensionMismatchError):
        a + DoubleCochain(1, 0, {}, GF(2))


def test_zeta_class_matches_f_star_on_rp2():
    cover = star_cover(F.rp2())
    mv = MayerVietoris(cover, 1, GF(2))
    N = cover.nerve()
    for p in range(3):
        for phi in cohomology(N, GF(2), p).representatives:
            assert class_equal(mv.zeta_cochain(phi), cover.f_star(phi, 1))
