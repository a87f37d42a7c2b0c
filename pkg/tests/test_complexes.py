import pytest

from mvnerve import fixtures as F
from mvnerve.complexes import (
    Cochain,
    SimplicialMap,
    alternation,
    betti_numbers,
    class_equal,
    close_downward,
    coboundary,
    coboundary_matrix,
    cohomology,
    is_alternating,
    is_cocycle,
    ordered_coboundary_matrix,
    pullback,
)
from mvnerve.errors import InvalidComplexError, NotACocycleError
from mvnerve.rings import GF, QQ, ZZ

from oracles import betti_oracle, integral_torsion_oracle

RINGS = [QQ, GF(2), GF(3), ZZ]


def test_close_downward_counts():
    assert [F.triangle_boundary().count(d) for d in range(2)] == [3, 3]
    assert [F.full_triangle().count(d) for d in range(3)] == [3, 3, 1]
    assert [F.rp2().count(d) for d in range(3)] == [6, 15, 10]
    assert [F.torus7().count(d) for d in range(3)] == [7, 21, 14]


def test_close_downward_unknown_vertex():
    with pytest.raises(InvalidComplexError):
        close_downward([[0, 5]], [0, 1])


def test_algebraic_simplices_include_repeats():
    K = F.triangle_boundary()
    edges = K.algebraic_simplices(1)
    # 3 degenerate (v, v) plus both orders of the 3 edges
    assert len(edges) == 9
    assert (1, 0) in edges and (0, 0) in edges
    assert not K.is_simplex((0, 1, 2))


def test_coboundary_examples():
    K = F.triangle_boundary()
    dc = coboundary(Cochain.indicator(K, (0,)))
    assert dc[(0, 1)] == -1 and dc[(1, 0)] == 1 and dc[(0, 0)] == 0
    assert coboundary(Cochain.zero(K, 0)).is_zero()
    H = F.hexagon()
    d = coboundary(Cochain.indicator(H, (0,)))
    # (0,1), (1,0), (0,5), (5,0) nonzero; (0,0) cancels
    assert sorted(d.values) == [(0, 1), (0, 5), (1, 0), (5, 0)]


def test_coboundary_squares_to_zero_matrices():
    for K in (F.rp2(), F.torus7(), F.tetrahedron_boundary()):
        for ring in RINGS:
            for p in range(K.dim - 1):
                assert (coboundary_matrix(K, p + 1, ring) @ coboundary_matrix(K, p, ring)).is_zero()
                assert (ordered_coboundary_matrix(K, p + 1, ring) @ ordered_coboundary_matrix(K, p, ring)).is_zero()


def test_alternation_examples():
    K = F.triangle_boundary()
    c = Cochain(K, 1, {(0, 1): 1, (1, 0): -1})
    assert alternation(c) == c
    assert alternation(Cochain(K, 1, {(0, 0): 5, (2, 2): 1})).is_zero()
    # signed-sort form: only the value on the increasing tuple is read, so an
    # indicator on the decreasing tuple alternates to zero
    assert alternation(Cochain.indicator(K, (1, 0))).is_zero()
    flip = alternation(Cochain.indicator(K, (0, 1)))
    assert flip[(1, 0)] == -1 and flip[(0, 1)] == 1


def test_alternation_is_idempotent_chain_map():
    K = F.full_triangle()
    c = Cochain(K, 1, {(0, 1): 2, (2, 1): 3, (1, 1): 7, (0, 2): -1})
    a = alternation(c)
    assert alternation(a) == a and is_alternating(a)
    assert alternation(coboundary(c)) == coboundary(a)


def test_pullback_functorial():
    K = F.full_triangle()
    f = SimplicialMap(K, K, {0: 1, 1: 1, 2: 2})
    g = SimplicialMap(K, K, {0: 2, 1: 0, 2: 1})
    c = Cochain(K, 1, {(1, 2): 1, (2, 0): 4, (0, 0): 2})
    assert pullback(f.compose(g), c) == pullback(g, pullback(f, c))
    assert pullback(SimplicialMap.identity(K), c) == c
    assert coboundary(pullback(f, c)) == pullback(f, coboundary(c))


def test_simplicial_map_rejects_non_simplicial():
    K = F.triangle_boundary()
    P = close_downward([[0], [1]], [0, 1])
    with pytest.raises(InvalidComplexError):
        SimplicialMap(K, P, {0: 0, 1: 1, 2: 1})


def test_cohomology_examples():
    assert betti_numbers(F.triangle_boundary(), QQ) == [1, 1]
    assert betti_numbers(F.rp2(), GF(2)) == [1, 1, 1]
    assert betti_numbers(F.rp2(), QQ) == [1, 0, 0]
    h2 = cohomology(F.rp2(), ZZ, 2)
    assert (h2.free_rank, h2.torsion) == (0, (2,))
    assert betti_numbers(F.torus7(), ZZ) == [1, 2, 1]


@pytest.mark.parametrize("name", sorted(F.COMPLEXES))
def test_betti_oracle(name):
    K = F.COMPLEXES[name]()
    facets = [list(f) for f in K.facets]
    assert betti_numbers(K, QQ) == betti_oracle(facets)
    assert betti_numbers(K, GF(2)) == betti_oracle(facets, 2)
    assert betti_numbers(K, GF(3)) == betti_oracle(facets, 3)
    for q in range(K.dim + 1):
        assert list(cohomology(K, ZZ, q).torsion) == integral_torsion_oracle(facets, q)


def test_representatives_are_alternating_cocycles():
    for K in (F.rp2(), F.torus7()):
        for ring in RINGS:
            for p in range(K.dim + 1):
                for z in cohomology(K, ring, p).representatives:
                    assert is_cocycle(z) and is_alternating(z)


def test_class_equal_hexagon_winding():
    H = F.hexagon()
    winding1 = alternation(Cochain.indicator(H, (0, 1)))
    winding0 = Cochain.zero(H, 1)
    assert not class_equal(winding1, winding0)
    w = Cochain(H, 0, {(2,): 3, (4,): -1})
    assert class_equal(winding1, winding1 + coboundary(w))
    assert class_equal(winding1, winding1 + coboundary(w), ordered=True)


def test_class_equal_alternation_identity_all_rings():
    # z + dw with w non-alternating is an ordered cocycle that is not alternating
    K = F.rp2()
    w = Cochain(K, 1, {(0, 1): 1, (3, 3): 2, (4, 0): -1}, check=True)
    for ring in RINGS:
        w_r = Cochain(K, 1, w.values, ring)
        for z in cohomology(K, ring, 2).representatives + (Cochain.zero(K, 2, ring),):
            c = z + coboundary(w_r)
            assert is_cocycle(c) and not is_alternating(c)
            assert class_equal(c, alternation(c))
            assert class_equal(c, alternation(c), ordered=True)
            assert class_equal(c, z)


def test_class_equal_requires_cocycles():
    K = F.full_triangle()
    with pytest.raises(NotACocycleError):
        class_equal(Cochain.indicator(K, (0, 1)), Cochain.zero(K, 1))
