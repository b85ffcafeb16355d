"""Characteristic polynomials and certified spectral radii of integer matrices.

The characteristic polynomial is computed exactly (Faddeev-LeVerrier over
``Fraction``).  Roots of its squarefree part are found with Aberth-Ehrlich
iterations in complex binary64; each approximation ``z_i`` then gets an
inclusion radius

    r_i = n |p(z_i)| / |lc(p) prod_{j != i} (z_i - z_j)|,

evaluated at 50 significant digits.  The union of the disks contains every
root, and each connected cluster of disks contains at least one, which
brackets the spectral radius.  If the bracket is too wide the roots are
polished at higher precision with mpmath and the radii recomputed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import ArityMismatch, BudgetExceeded, ConvergenceFailure
from .numeric import log_of_int

Matrix = list[list[int]]

DEFAULT_WIDTH_TOL = 1e-9
DEFAULT_ENTRY_BITS_CAP = 1_000_000


@dataclass(frozen=True)
class SpectralEstimate:
    rho: float
    lo: float
    hi: float
    char_poly: tuple[int, ...]
    roots: tuple[complex, ...] = field(default=(), repr=False)

    @property
    def certified_interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def as_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    rows = [list(map(int, r)) for r in M]
    r = len(rows)
    if r == 0 or any(len(row) != r for row in rows):
        raise ArityMismatch("pullback matrix must be square and nonempty")
    return rows


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m, p = len(A), len(B), len(B[0])
    cols = [[B[k][j] for k in range(m)] for j in range(p)]
    return [[sum(a * b for a, b in zip(A[i], cols[j])) for j in range(p)] for i in range(n)]


def identity(r: int) -> Matrix:
    return [[int(i == j) for j in range(r)] for i in range(r)]


def matrix_power(M: Matrix, k: int) -> Matrix:
    result = identity(len(M))
    base = M
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def char_poly(M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Monic characteristic polynomial, highest degree first.

    >>> char_poly([[1, 1], [1, 0]])
    (1, -1, -1)
    """
    A = [[Fraction(x) for x in row] for row in as_matrix(M)]
    n = len(A)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        AMk = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AMk[i][i] for i in range(n)) / k
        coeffs.append(c)
    assert all(x.denominator == 1 for x in coeffs)
    return tuple(int(x) for x in coeffs)


def eval_poly_at_matrix(coeffs: Sequence[int], M: Sequence[Sequence[int]]) -> Matrix:
    """Horner evaluation of an integer polynomial at an integer matrix."""
    M = as_matrix(M)
    r = len(M)
    acc = [[0] * r for _ in range(r)]
    for c in coeffs:
        acc = matmul(acc, M)
        for i in range(r):
            acc[i][i] += c
    return acc


# ---- univariate helpers over Q (highest degree first) ----------------------


def _trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _polyrem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a = a[1:]
    return _trim(a) if a else [Fraction(0)]


def _polydiv(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    out = []
    while len(a) >= len(b):
        q = a[0] / b[0]
        out.append(q)
        for i in range(len(b)):
            a[i] -= q * b[i]
        a = a[1:]
    return out or [Fraction(0)]


def _polygcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while any(b):
        a, b = b, _polyrem(a, b)
    return [x / a[0] for x in a]


def squarefree_part(coeffs: Sequence[int]) -> list[Fraction]:
    p = [Fraction(c) for c in coeffs]
    n = len(p) - 1
    if n <= 1:
        return p
    dp = [c * (n - i) for i, c in enumerate(p[:-1])]
    g = _polygcd(p, dp)
    if len(g) == 1:
        return p
    return _polydiv(p, g)


# ---- root finding ----------------------------------------------------------


def _aberth(coeffs: np.ndarray, max_iter: int = 500) -> np.ndarray:
    n = len(coeffs) - 1
    p = np.poly1d(coeffs)
    dp = p.deriv()
    bound = 1 + np.max(np.abs(coeffs[1:] / coeffs[0]))
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = bound * np.exp(1j * angles)
    for _ in range(max_iter):
        pz, dpz = p(z), dp(z)
        done = pz == 0
        ratio = np.where(done, 0, pz / np.where(dpz == 0, 1e-300, dpz))
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        s = np.sum(1 / diff, axis=1) - 1  # drop the diagonal 1/1 term
        w = ratio / (1 - ratio * s)
        w = np.where(done, 0, w)
        z = z - w
        if np.all(np.abs(w) <= 4e-16 * np.maximum(np.abs(z), 1e-300)):
            break
    return z


def _inclusion_radii(coeffs: Sequence[Fraction], roots: Sequence, dps: int = 50) -> list[float]:
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        zs = [mpmath.mpc(z) for z in roots]
        n = len(zs)
        radii = []
        for i, z in enumerate(zs):
            val = mpmath.polyval(cs, z)
            if val == 0:
                radii.append(0.0)
                continue
            denom = cs[0]
            for j, w in enumerate(zs):
                if j != i:
                    denom *= z - w
            if denom == 0:
                radii.append(math.inf)
                continue
            radii.append(float(n * abs(val) / abs(denom)) * (1 + 1e-12))
        return radii


def _polish(coeffs: Sequence[Fraction], roots: Sequence, dps: int = 40, steps: int = 60):
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        zs = [mpmath.mpc(z) for z in roots]
        for _ in range(steps):
            new = []
            for i, z in enumerate(zs):
                pz = mpmath.polyval(cs, z, derivative=True)
                val, der = pz
                if val == 0:
                    new.append(z)
                    continue
                ratio = val / der if der != 0 else mpmath.mpf(0)
                s = sum(1 / (z - w) for j, w in enumerate(zs) if j != i)
                new.append(z - ratio / (1 - ratio * s))
            zs = new
        return zs


def _bracket(roots, radii) -> tuple[float, float]:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(complex(roots[i]) - complex(roots[j])) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    hi = max(abs(complex(roots[i])) + radii[i] for i in range(n))
    lo = max(
        max(0.0, min(abs(complex(roots[i])) - radii[i] for i in members))
        for members in clusters.values()
    )
    # float rounding of |z| +- r: widen outward by a few ulps
    return lo * (1 - 4e-16), hi * (1 + 4e-16)


def spectral_radius(M: Sequence[Sequence[int]], tol: float = DEFAULT_WIDTH_TOL) -> SpectralEstimate:
    """Spectral radius with a certified bracket of width at most ``tol``."""
    cp = char_poly(M)
    sf = squarefree_part(cp)
    if len(sf) == 1:
        raise ConvergenceFailure("constant characteristic polynomial")
    if len(sf) == 2:
        root = -sf[1] / sf[0]
        r = abs(float(root))
        return SpectralEstimate(r, r, r, cp, (complex(float(root)),))
    roots = _aberth(np.array([float(c) for c in sf], dtype=float))
    radii = _inclusion_radii(sf, roots)
    lo, hi = _bracket(roots, radii)
    if not hi - lo <= tol:
        fine = _polish(sf, roots)
        radii = _inclusion_radii(sf, fine, dps=60)
        roots = np.array([complex(z) for z in fine])
        lo, hi = _bracket(fine, radii)
    rho = float(max(abs(z) for z in roots))
    if not hi - lo <= tol:
        raise ConvergenceFailure(
            f"spectral radius bracket [{lo}, {hi}] wider than {tol}", interval=(lo, hi)
        )
    rho = min(max(rho, lo), hi)
    return SpectralEstimate(rho, lo, hi, cp, tuple(complex(z) for z in roots))


def gelfand_sequence(
    M: Sequence[Sequence[int]], n_max: int, bits_cap: int = DEFAULT_ENTRY_BITS_CAP
) -> list[float]:
    """``||M^n||^(1/n)`` for ``n = 1..n_max`` with the max-absolute-entry norm."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    M = as_matrix(M)
    out = []
    P = M
    for n in range(1, n_max + 1):
        if n > 1:
            P = matmul(P, M)
        norm = max(abs(x) for row in P for x in row)
        if norm.bit_length() > bits_cap:
            raise BudgetExceeded(f"matrix power entries exceed {bits_cap} bits at n={n}")
        out.append(0.0 if norm == 0 else math.exp(log_of_int(norm) / n))
    return out
