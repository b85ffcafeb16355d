import csv
import io
import json
import math

import pytest

from arithdyn.config import config_from_dict
from arithdyn.corpus import corpus_config
from arithdyn.errors import IndeterminatePoint, NotCertifiedMorphism, NotStable, SchemaError
from arithdyn.harness import (
    CSV_COLUMNS,
    orbit_csv,
    run_suite,
    tail_bounded,
    verify_canheight,
    verify_main,
    verify_morphism_bounds,
    verify_picard_one,
    verify_power,
)


def projective(polys, points, suite="main", **extra):
    d = {"suite": suite, "points": points, "ambient": {"projective_dim": len(polys) - 1},
         "map": {"polynomials": polys}}
    d.update(extra)
    return config_from_dict(d)


def test_tail_bounded():
    assert tail_bounded([1.0, 0.5, 0.4, 0.3])
    assert not tail_bounded([1.0, 0.5, 0.4, 1.2])
    assert tail_bounded([None, 2.0, 1.0, 1.0, 1.0])
    assert tail_bounded([1.0, 1.0, 1.0, 1.0 + 1e-12])


def test_main_henon():
    rep = verify_main(corpus_config("henon"))
    assert rep.passed
    assert rep.constants["delta_up"] == 2.0
    origin, generic = rep.points
    q = origin.ratios
    assert q == tuple(2.1 ** -n for n in range(21)) or all(
        abs(a - 2.1 ** -n) <= 1e-14 for n, a in enumerate(q)
    )
    assert 1.8 <= generic.alpha_bar_est <= 2.0


def test_main_identity():
    cfg = projective(["X", "Y", "Z"], [[2, 3, 5]], epsilon=0.3)
    rep = verify_main(cfg)
    assert rep.passed
    assert all(abs(q - 1.3 ** -n) <= 1e-12 for n, q in enumerate(rep.points[0].ratios))


def test_main_cremona():
    rep = verify_main(corpus_config("cremona"))
    assert rep.passed
    assert rep.constants["delta_up"] == 1.0
    assert rep.details["degrees"] == [2, 1, 2, 1, 2, 1]


def test_main_monomial():
    rep = verify_main(corpus_config("monomial"))
    assert rep.passed
    assert rep.details["source"] == "ExponentMatrix"


def test_main_detects_growth_above_bound():
    # claim delta = 1 for the squaring map through a user matrix
    cfg = projective(["X^2", "Y^2"], [[2, 3]], epsilon=0.1, iterations=12)
    cfg = cfg.replace(pullback_matrix=((1,),))
    rep = verify_main(cfg)
    assert not rep.passed
    assert rep.reason == "tail_growth"


def test_main_base_point():
    cfg = projective(["Y*Z", "X*Z", "X*Y"], [[1, 0, 0]], epsilon=0.1)
    with pytest.raises(IndeterminatePoint):
        run_suite(cfg)


def test_morphism_squaring():
    rep = verify_morphism_bounds(corpus_config("squaring"))
    assert rep.passed
    assert rep.details["branch"] == "geometric"
    assert rep.constants["C"] == pytest.approx(1.0, abs=1e-12)


def test_morphism_parabolic_closed_form():
    rep = verify_morphism_bounds(corpus_config("parabolic"))
    assert rep.passed
    assert rep.details["branch"] == "quadratic"
    orbit = rep.orbits[0]
    assert [P.coords for P in orbit.points] == [(n, 1) for n in range(21)]
    for n in range(1, 21):
        assert rep.points[0].ratios[n] == pytest.approx(max(math.log(n), 1.0) / n**2, rel=1e-12)
    assert rep.constants["C"] == 1.0


def test_morphism_permutation():
    rep = verify_morphism_bounds(corpus_config("permutation"))
    assert rep.passed
    assert len(set(rep.orbits[0].h)) == 1


def test_morphism_requires_certificate():
    cfg = projective(["Y*Z", "X*Z", "X*Y"], [[2, 3, 5]], suite="morphism")
    with pytest.raises(NotCertifiedMorphism):
        verify_morphism_bounds(cfg)
    cfg = projective(["X^2", "Y^2", "Z^2"], [[2, 3, 5]], suite="morphism")
    with pytest.raises(NotCertifiedMorphism):
        verify_morphism_bounds(cfg)
    cfg = cfg.replace(assert_morphism=True)
    assert verify_morphism_bounds(cfg).details["asserted"]


@pytest.mark.parametrize("name, k, d_k, branch", [
    ("cremona_picard", 2, 1, "quadratic"),
    ("henon_picard", 3, 8, "geometric"),
])
def test_picard_one(name, k, d_k, branch):
    rep = verify_picard_one(corpus_config(name))
    assert rep.passed
    assert rep.constants["k"] == k and rep.constants["d_k"] == d_k
    assert rep.details["branch"] == branch


def test_picard_one_k1_matches_k3_for_henon():
    base = corpus_config("henon_picard")
    r1 = verify_picard_one(base.replace(k=1))
    r3 = verify_picard_one(base)
    assert r1.constants["d_k"] == 2
    assert r1.passed and r3.passed
    for a, b in zip(r1.points[0].ratios, r3.points[0].ratios):
        assert a == pytest.approx(b, rel=1e-12)


def test_picard_one_rejects_torus():
    with pytest.raises(SchemaError):
        verify_picard_one(corpus_config("monomial"))


def test_power_suite():
    rep = verify_power(corpus_config("henon_power"))
    assert rep.passed
    assert rep.details["direct_degrees"] == rep.details["subsampled_degrees"] == [4, 16, 64]
    rep3 = verify_power(corpus_config("henon_power").replace(k=3))
    assert rep3.passed and rep3.details["orbit_steps"] == 21


def test_canheight_suite():
    rep = verify_canheight(corpus_config("henon_canheight"))
    assert rep.passed
    for pr in rep.points:
        assert pr.extras["telescoping_residual"] <= 1e-9
        assert pr.extras["transform_residual"] <= pr.extras["transform_bound"]
    sq = verify_canheight(projective(["X^2", "Y^2"], [[2, 3]], suite="canheight"))
    assert sq.points[0].extras["hhat"] == pytest.approx(math.log(3), abs=1e-12)


def test_canheight_refuses_unstable():
    with pytest.raises(NotStable):
        verify_canheight(corpus_config("cremona").replace(suite="canheight"))


def test_seqlem_suite():
    cfg = corpus_config("seqlem")
    rep = run_suite(cfg)
    assert rep.details["lemma0_violations"] == 0
    assert rep.details["lemma_sum_repaired_violations"] == 0
    rep2 = run_suite(cfg.replace(seqlem=type(cfg.seqlem)(constant="repaired")))
    assert rep2.passed


def test_orbit_csv_format():
    rep = run_suite(corpus_config("henon"))
    text = orbit_csv(rep.orbits[1], rep.points[1].ratios)
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 22
    assert rows[1][4] == ""
    assert rows[1][0] == "0" and rows[21][0] == "20"
    for r in rows[1:]:
        for cell in r[2:]:
            if cell:
                assert float(cell) == float(format(float(cell), ".17g"))


def test_outputs_written(tmp_path):
    run_suite(corpus_config("henon"), tmp_path)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["henon_main_p0.csv", "henon_main_p1.csv", "henon_main_report.json"]
    rep = json.loads((tmp_path / "henon_main_report.json").read_text())
    assert rep["passed"] is True and rep["suite"] == "main"
    assert len(rep["points"]) == 2
