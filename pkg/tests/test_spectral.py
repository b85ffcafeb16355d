import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from arithdyn.errors import ArityMismatch, ConvergenceFailure
from arithdyn.spectral import char_poly, eval_poly_at_matrix, gelfand_sequence, spectral_radius

PHI = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize(
    "M, cp",
    [
        ([[1, 1], [1, 0]], (1, -1, -1)),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, -3, 3, -1)),
        ([[2, 1], [1, 1]], (1, -3, 1)),
    ],
)
def test_char_poly_golden(M, cp):
    assert char_poly(M) == cp


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_char_poly_against_sympy(M):
    lam = sympy.Symbol("lam")
    expected = sympy.Poly(sympy.Matrix(M).charpoly(lam).as_expr(), lam).all_coeffs()
    assert list(char_poly(M)) == [int(c) for c in expected]


def test_cayley_hamilton_random():
    rng = random.Random(5)
    for _ in range(50):
        M = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)]
        Z = eval_poly_at_matrix(char_poly(M), M)
        assert all(x == 0 for row in Z for x in row)


@pytest.mark.parametrize(
    "M, rho",
    [
        ([[1, 1], [1, 0]], 1.618033988749895),
        ([[2, 1], [1, 1]], 2.618033988749895),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1.0),
        ([[0, 1], [0, 0]], 0.0),
        ([[2, 0], [0, 2]], 2.0),
        ([[0, -1], [1, 0]], 1.0),
    ],
)
def test_spectral_radius_golden(M, rho):
    est = spectral_radius(M)
    assert abs(est.rho - rho) <= 1e-9
    assert est.lo <= rho <= est.hi
    assert est.width <= 1e-9


def test_spectral_radius_against_numpy():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(2, 7)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if all(x == 0 for r in M for x in r):
            continue
        est = spectral_radius(M)
        ref = max(abs(np.linalg.eigvals(np.array(M, dtype=float))))
        assert abs(est.rho - ref) <= 1e-6 * max(1.0, ref)


def test_bracket_contains_mpmath_root():
    import mpmath

    M = [[3, 1, 0], [1, 2, 1], [0, 1, 1]]
    est = spectral_radius(M)
    with mpmath.workdps(50):
        roots = mpmath.polyroots(list(char_poly(M)), maxsteps=200, extraprec=200)
        rho = max(abs(r) for r in roots)
    assert est.lo <= float(rho) <= est.hi


def test_spectral_radius_errors():
    with pytest.raises(ArityMismatch):
        spectral_radius([[1, 2]])
    with pytest.raises(ConvergenceFailure):
        spectral_radius([[1, 1], [1, 0]], tol=-1.0)


def test_gelfand():
    assert gelfand_sequence([[1, 0], [0, 1]], 5) == [1.0] * 5
    g = gelfand_sequence([[1, 1], [1, 0]], 10)
    assert g[-1] == pytest.approx(89 ** 0.1, rel=1e-14)
    assert g[-1] == pytest.approx(1.5666, abs=1e-4)
    assert gelfand_sequence([[2, 0], [0, 1]], 8)[-1] == pytest.approx(2.0, rel=1e-15)
    assert abs(gelfand_sequence([[1, 1], [1, 0]], 400)[-1] - PHI) < 0.01
