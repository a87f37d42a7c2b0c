import json

import pytest

from mvnerve import fixtures as F
from mvnerve.complexes import Cochain, SimplicialMap
from mvnerve.covers import StarCover, star_cover
from mvnerve.errors import PreconditionError
from mvnerve.harness import (
    SCHEMA,
    ClassResult,
    DegreeResult,
    VerificationReport,
    check_containment,
    eta_representatives,
    fstar_representatives,
    run_choice_independence,
    run_main_theorem,
    run_naturality,
    run_prop_star,
    run_star_structure,
    serialize_cochain,
)
from mvnerve.rings import GF, QQ, ZZ


def test_serialize_cochain_is_sparse_and_sorted():
    K = F.triangle_boundary()
    c = Cochain(K, 1, {(1, 2): QQ.coerce("3/4"), (0, 1): -1})
    assert serialize_cochain(c) == [[[0, 1], "-1"], [[1, 2], "3/4"]]


def test_report_pass_logic():
    r = VerificationReport("demo", "Q")
    assert r.passed
    r.degrees.append(DegreeResult(0, 1, [ClassResult(0, {"a": True, "b": False}, witness=[])]))
    assert not r.passed
    d = r.to_dict()
    assert d["schema"] == SCHEMA and d["degrees"][0]["classes"][0]["witness"] == []
    assert "timings" not in d
    r.timings["x"] = 0.5
    assert r.to_dict(include_timings=True)["timings"] == {"x": 0.5}
    with pytest.raises(KeyError):
        r.degree(3)


@pytest.mark.parametrize("ring", [QQ, GF(2), GF(3), ZZ], ids=str)
def test_prop_star_rp2(ring):
    report = run_prop_star(F.rp2(), ring)
    assert report.passed
    for d in report.degrees:
        for res in d.results:
            assert set(res.checks) == {"lemma_exact", "class_equal"}


def test_main_theorem_hexagon_ab_records_unreached_class():
    report = run_main_theorem(F.cover_ab(), QQ)
    assert report.passed
    assert report.config["r"] == report.config["r_prime"] == 1
    assert report.degree(1).basis_size == 0
    assert any("not reached" in n for n in report.degree(1).notes)


@pytest.mark.parametrize("name,cover", F.main_theorem_cases())
def test_main_theorem_fixture_corpus(name, cover):
    for ring in (QQ, GF(2)):
        assert run_main_theorem(cover, ring).passed, name


def test_choice_independence_hexagon():
    assert run_choice_independence(F.cover_abc(), ZZ).passed
    assert run_choice_independence(star_cover(F.rp2()), GF(2), rules=("min", "max", "vertex")).passed


def test_eta_and_fstar_levels_agree():
    cover = star_cover(F.rp2())
    level, reps = eta_representatives(cover, GF(2))
    level2, reps2 = fstar_representatives(cover, GF(2))
    assert level == level2 == 1
    assert [p for p, _ in reps] == [p for p, _ in reps2] == [0, 1, 2]


def test_naturality_inclusion():
    K, L = F.triangle_boundary(), F.full_triangle()
    h = SimplicialMap(K, L, {0: 0, 1: 1, 2: 2})
    report = run_naturality(h, star_cover(K), star_cover(L), QQ)
    assert report.passed


def test_naturality_refinement():
    H = F.hexagon()
    h = SimplicialMap.identity(H)
    fine = StarCover(H, {"a": [0, 1, 2], "b": [3, 4, 5]})
    coarse = StarCover(H, {"a": [0, 1, 2, 3], "b": [3, 4, 5, 0]})
    for ring in (QQ, ZZ):
        assert run_naturality(h, fine, coarse, ring).passed


def test_containment_failure():
    H = F.hexagon()
    h = SimplicialMap.identity(H)
    fine = StarCover(H, {"a": [0, 1, 2], "b": [3, 4, 5]})
    coarse = StarCover(H, {"a": [0, 1, 2, 3], "b": [3, 4, 5, 0]})
    with pytest.raises(PreconditionError):
        check_containment(h, coarse, fine)


@pytest.mark.parametrize("ring", [QQ, GF(2), ZZ], ids=str)
def test_star_structure(ring):
    report = run_star_structure(F.rp2(), ring)
    assert report.passed and report.checks


@pytest.mark.parametrize(
    "run",
    [
        lambda: run_prop_star(F.torus7(), ZZ, max_degree=1),
        lambda: run_main_theorem(F.cover_abc(), GF(3)),
        lambda: run_naturality(SimplicialMap.identity(F.hexagon()), F.cover_ab(), F.cover_ab(), QQ),
    ],
)
def test_reports_are_byte_identical(run):
    first, second = run().to_json(), run().to_json()
    assert first == second
    assert json.loads(first)["schema"] == 1
