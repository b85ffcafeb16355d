import math
import random
from fractions import Fraction

import pytest

from arithdyn.degrees import MonomialMap
from arithdyn.errors import AllZero, TooShort
from arithdyn.orbits import (
    RationalTorusPoint,
    Termination,
    TorusPoint,
    apply_monomial,
    check_power_consistency,
    compute_orbit,
    estimate_arith_degree,
    fit_uniform_bound,
    torus_point,
)
from arithdyn.projmap import ProjPoint, RationalMap, normalize_point, weil_height

PHI = (1 + math.sqrt(5)) / 2
HENON = RationalMap.from_strings(["Y*Z", "Y^2 - X*Z - Z^2", "Z^2"])
CREMONA = RationalMap.from_strings(["Y*Z", "X*Z", "X*Y"])
FIB = MonomialMap([[1, 1], [1, 0]])


def test_fixed_point_orbit():
    o = compute_orbit(CREMONA, ProjPoint((1, 1, 1)), 5)
    assert o.terminated is Termination.COMPLETED
    assert o.h == [0.0] * 6
    est = estimate_arith_degree(compute_orbit(CREMONA, ProjPoint((1, 1, 1)), 20))
    assert est.alpha_bar_est == 1.0 and est.alpha_lower_est == 1.0


def test_base_point():
    o = compute_orbit(CREMONA, ProjPoint((1, 0, 0)), 5)
    assert o.terminated is Termination.HIT_INDETERMINACY
    assert o.termination_label() == "HitIndeterminacy(0)"
    assert o.length == 1


def test_base_point_reached_later():
    # (1:1:0) -> (0:0:1), a base point of the Cremona involution
    o = compute_orbit(CREMONA, ProjPoint((1, 1, 0)), 5)
    assert o.termination_label() == "HitIndeterminacy(1)"


def test_henon_origin_is_periodic():
    o = compute_orbit(HENON, ProjPoint((0, 0, 1)), 10)
    assert o.h == [0.0] * 11
    assert o.points[3] == o.points[0]


def test_henon_generic_point_doubles():
    o = compute_orbit(HENON, ProjPoint((2, 3, 1)), 12)
    h = o.h
    assert all(h[n + 1] > h[n] for n in range(2, 12))
    assert abs(h[12] / h[11] - 2.0) < 1e-3


def test_henon_orbit_matches_plain_evaluation():
    P = (2, 3, 1)
    pts = [P]
    for _ in range(8):
        x, y, z = pts[-1]
        pts.append(tuple(normalize_point((y * z, y * y - x * z - z * z, z * z)).coords))
    o = compute_orbit(HENON, ProjPoint(P), 8)
    assert [Q.coords for Q in o.points] == pts


def test_henon_arith_degree():
    est = estimate_arith_degree(compute_orbit(HENON, ProjPoint((2, 3, 1)), 20))
    assert 1.8 <= est.alpha_bar_est <= 2.0
    assert est.tail_start == 10
    assert len(est.alpha_upper_seq) == 20


def test_overflow_guard():
    o = compute_orbit(HENON, ProjPoint((2, 3, 1)), 30, height_cap=1000.0)
    assert o.terminated is Termination.OVERFLOW_GUARD
    assert max(o.h) <= 1000.0
    assert o.stop_index == o.length


def test_too_short():
    with pytest.raises(TooShort):
        estimate_arith_degree(compute_orbit(HENON, ProjPoint((2, 3, 1)), 5))


def test_torus_point_representation():
    P = torus_point([2, "-3/4"])
    assert isinstance(P, TorusPoint)
    assert P.coords() == (2, Fraction(-3, 4))
    assert P.height().h == pytest.approx(math.log(4 * 2), rel=1e-15)
    assert isinstance(torus_point([10007, 1]), RationalTorusPoint)
    with pytest.raises(AllZero):
        torus_point([0, 1])


def test_torus_heights_match_projective():
    rng = random.Random(3)
    for _ in range(50):
        vals = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 60), rng.randint(1, 60)) for _ in range(2)]
        P = torus_point(vals)
        ref = weil_height(normalize_point([1] + vals)).h
        assert P.height().h == pytest.approx(ref, rel=1e-12, abs=1e-12)
        Q = apply_monomial(FIB, P)
        x, y = vals
        assert Q.coords() == (x * y, x)


def test_monomial_orbit_golden_ratio():
    o = compute_orbit(FIB, torus_point([2, 3]), 25)
    root = o.h_plus[25] ** (1 / 25)
    assert abs(root - PHI) <= 0.05


def test_monomial_orbit_exponents_are_fibonacci():
    o = compute_orbit(FIB, torus_point([2, 3]), 10)
    fib = [0, 1]
    for _ in range(12):
        fib.append(fib[-1] + fib[-2])
    # x_n = 2^F(n+1) 3^F(n)
    assert o.points[10].coords()[0] == 2 ** fib[11] * 3 ** fib[10]


def test_fit_uniform_bound():
    sample = [ProjPoint((a, b, c)) for a, b, c in [(1, 2, 3), (2, 3, 5), (7, 1, 4), (3, 8, 1)]]
    assert fit_uniform_bound(RationalMap.identity(2), sample).C0 == 1.0
    c0 = fit_uniform_bound(CREMONA, sample).C0
    assert 1.0 <= c0 <= 2 + math.log(3)
    rng = random.Random(0)
    pts = []
    while len(pts) < 100:
        raw = [rng.randint(1, 99) for _ in range(3)]
        pts.append(normalize_point(raw))
    assert fit_uniform_bound(CREMONA, pts).C0 <= 2 + math.log(3)


def test_power_consistency_henon():
    for k, m in [(2, 10), (3, 7)]:
        pc = check_power_consistency(HENON, ProjPoint((2, 3, 1)), k, m)
        assert pc.difference <= 0.1


def test_power_consistency_identity_and_monomial():
    pc = check_power_consistency(RationalMap.identity(2), ProjPoint((1, 2, 1)), 3, 8)
    assert pc.alpha_f == 1.0 and pc.alpha_fk_root == 1.0
    pc = check_power_consistency(FIB, torus_point([2, 3]), 3, 8)
    assert pc.difference <= 0.1
