"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
Criterion 7 has a second part that fails on its own terms: the constant
claimed for the summed-hypothesis lemma is too small.  That test is marked
``xfail(strict=True)`` so the failure stays visible and the suite flags it if
it ever starts passing.
"""

import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from arithdyn import corpus_config, corpus_names
from arithdyn.canheight import canonical_height, defect_sequence, telescoping_residuals, transform_check
from arithdyn.degrees import Stability, degree_sequence, estimate_dyndeg, power_degree_consistency
from arithdyn.harness import alpha_bar_or_none, checked_orbit, delta_upper, verify_main, verify_morphism_bounds
from arithdyn.orbits import check_power_consistency, compute_orbit, torus_point
from arithdyn.projmap import RationalMap, iterate_map, normalize_point
from arithdyn.seqlem import sweep
from arithdyn.spectral import char_poly, eval_poly_at_matrix, spectral_radius

PHI = (1 + math.sqrt(5)) / 2
HENON = RationalMap.from_strings(["Y*Z", "Y^2 - X*Z - Z^2", "Z^2"], ["X", "Y", "Z"])
CREMONA = RationalMap.from_strings(["Y*Z", "X*Z", "X*Y"], ["X", "Y", "Z"])
SQUARING = RationalMap.from_strings(["X^2", "Y^2"], ["X", "Y"])


def report(n, ok, detail=""):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return ok


def _map_point_configs():
    for name in corpus_names():
        cfg = corpus_config(name)
        if cfg.map is not None and cfg.points:
            yield name, cfg


def test_criterion_1_cremona():
    t = time.perf_counter()
    seq = degree_sequence(CREMONA, 6)
    est = estimate_dyndeg(seq)
    square = iterate_map(CREMONA, 2)
    elapsed = time.perf_counter() - t
    ok = (seq.d == (2, 1, 2, 1, 2, 1) and est.upper == 1.0
          and square == RationalMap.identity(2, ["X", "Y", "Z"]) and elapsed < 1.0)
    assert report(1, ok, f"degrees={seq.d} upper={est.upper} t={elapsed:.3f}s")


def test_criterion_2_henon_stable():
    t = time.perf_counter()
    seq = degree_sequence(HENON, 6)
    est = estimate_dyndeg(seq)
    elapsed = time.perf_counter() - t
    ok = (seq.d == (2, 4, 8, 16, 32, 64) and est.stable is Stability.STABLE
          and est.upper == 2.0 and est.value == 2.0 and elapsed < 30)
    assert report(2, ok, f"degrees={seq.d} stable={est.stable.value} t={elapsed:.3f}s")


def test_criterion_3_spectral():
    r1 = spectral_radius([[1, 1], [1, 0]])
    r2 = spectral_radius([[2, 1], [1, 1]])
    ok = abs(r1.rho - 1.618033988749895) <= 1e-9 and abs(r2.rho - 2.618033988749895) <= 1e-9
    ok = ok and r1.lo <= PHI <= r1.hi and r2.lo <= PHI + 1 <= r2.hi
    rng = random.Random(12345)
    zero = ((0,) * 5,) * 5
    ch = 0
    for _ in range(50):
        M = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)]
        ch += tuple(map(tuple, eval_poly_at_matrix(char_poly(M), M))) == zero
    ok = ok and ch == 50
    assert report(3, ok, f"rho1={r1.rho!r} rho2={r2.rho!r} cayley_hamilton={ch}/50")


def test_criterion_4_alpha_bar_shadow():
    t = time.perf_counter()
    rows = []
    for name, cfg in _map_point_configs():
        c = cfg.replace(suite="main", iterations=20, epsilon=0.1)
        d_up, _ = delta_upper(c)
        rep = verify_main(c)
        for P, pr in zip(c.points, rep.points):
            a = pr.alpha_bar_est
            rows.append((name, str(P), a, d_up, pr.passed and a is not None and a <= d_up + 0.15))
    elapsed = time.perf_counter() - t
    bad = [r for r in rows if not r[4]]
    for r in rows:
        print(f"  {r[0]:16s} {r[1]:16s} alpha_bar={r[2]:.4f} delta_up={r[3]:.4f}")
    assert report(4, not bad and elapsed < 300, f"{len(rows)} pairs, {len(bad)} failing, t={elapsed:.2f}s"), bad


def test_criterion_5_monomial():
    cfg = corpus_config("monomial")
    orbit = compute_orbit(cfg.map, torus_point([2, 3]), 25)
    root = orbit.h_plus[25] ** (1 / 25)
    assert report(5, abs(root - PHI) <= 0.05, f"h+^(1/25)={root:.6f}")


def test_criterion_6_canonical_height():
    P = normalize_point([2, 3])
    orbit = compute_orbit(SQUARING, P, 20)
    B = defect_sequence(orbit, 2).B_values
    est = canonical_height(orbit, 2)
    ok = max(abs(b) for b in B) <= 1e-12 and abs(est.hhat - math.log(3)) <= 1e-12

    worst = 0.0
    runs = 0
    for name, cfg in _map_point_configs():
        if not isinstance(cfg.map, RationalMap) or cfg.map.degree < 2:
            continue
        if estimate_dyndeg(degree_sequence(cfg.map, 6)).stable is not Stability.STABLE:
            continue
        for Q in cfg.points:
            orb = checked_orbit(cfg, Q, 20)
            e = canonical_height(orb, cfg.map.degree)
            worst = max(worst, max(telescoping_residuals(orb, e)))
            runs += 1
    ok = ok and runs > 0 and worst <= 1e-9

    tc = transform_check(HENON, normalize_point([0, 0, 1]), 2, 18)
    ok = ok and tc.residual <= tc.bound
    assert report(6, ok, f"hhat={est.hhat!r} telescoping_worst={worst:.2e} over {runs} runs "
                         f"transform={tc.residual:.2e}<={tc.bound:.2e}")


@pytest.fixture(scope="module")
def seqlem_sweep():
    t = time.perf_counter()
    res = sweep(1000, 1000, 0)
    return res, time.perf_counter() - t


def test_criterion_7_lemma0(seqlem_sweep):
    res, elapsed = seqlem_sweep
    ok = res.lemma0_violations == 0 and elapsed < 10
    assert report("7a", ok, f"lemma0 violations={res.lemma0_violations} "
                            f"max ratio/Ct={res.lemma0_max_ratio_over_Ct:.4f} t={elapsed:.2f}s")


@pytest.mark.xfail(strict=True, reason="claimed constant max(C^2/4, 1+C) is too small; b_1 = C(a0+sqrt(a0)) exceeds it")
def test_criterion_7_summed_lemma(seqlem_sweep):
    res, _ = seqlem_sweep
    ok = res.lemma_sum_violations == 0
    report("7b", ok, f"summed lemma violations={res.lemma_sum_violations}/{res.trials} "
                     f"max ratio/Ct={res.lemma_sum_max_ratio_over_Ct:.4f} "
                     f"(repaired constant: {res.lemma_sum_repaired_violations}) "
                     f"first (a0, C, n)={res.lemma_sum_examples[:1]}")
    assert ok


def test_criterion_7_counterexample_is_exact():
    # a0 = 1, C = 2: b_1 = 2 * (1 + 1) = 4 > max(1, 3) * 1 * 1
    b1 = Fraction(2) * (1 + 1)
    assert b1 > max(Fraction(4, 4), 1 + 2)


def test_criterion_8_power_consistency():
    P = normalize_point([2, 3, 1])
    diffs = {}
    subs = {}
    for k, m in ((2, 10), (3, 7)):
        pc = check_power_consistency(HENON, P, k, m)
        diffs[k] = pc.difference
        direct, sub = power_degree_consistency(HENON, k, 6 // k)
        subs[k] = direct == sub
    ok = all(d <= 0.1 for d in diffs.values()) and all(subs.values())
    assert report(8, ok, f"differences={diffs} degree_subsample_equal={subs}")


def test_criterion_9_morphism_branches():
    sq = verify_morphism_bounds(corpus_config("squaring"))
    pa = verify_morphism_bounds(corpus_config("parabolic"))
    orbit = pa.orbits[0]
    closed = all(p.coords == (n, 1) for n, p in enumerate(orbit.points))
    heights = all(abs(hv.h - math.log(n)) <= 1e-15 for n, hv in enumerate(orbit.heights) if n >= 1)
    ok = (sq.passed and sq.details["branch"] == "geometric"
          and pa.passed and pa.details["branch"] == "quadratic" and closed and heights)
    assert report(9, ok, f"squaring C={sq.constants['C']:.4f} parabolic C={pa.constants['C']:.4f}")


_RUN_ALL = """
import sys
from arithdyn import corpus_config, corpus_names, run_suite
for name in corpus_names():
    run_suite(corpus_config(name), sys.argv[1])
"""


def test_criterion_10_determinism(tmp_path):
    outs = []
    for seed in ("1", "2"):
        d = tmp_path / f"run{seed}"
        env = dict(os.environ, PYTHONHASHSEED=seed)
        subprocess.run([sys.executable, "-c", _RUN_ALL, str(d)], check=True, env=env)
        outs.append({p.name: p.read_bytes() for p in sorted(Path(d).iterdir())})
    csvs = [n for n in outs[0] if n.endswith(".csv")]
    ok = outs[0] == outs[1] and len(csvs) >= len(corpus_names()) - 1
    assert report(10, ok, f"{len(outs[0])} files, {len(csvs)} CSV, identical={outs[0] == outs[1]}")
