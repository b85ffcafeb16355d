"""Orbits, height sequences and arithmetic degree estimates.

Orbits are computed point by point in exact arithmetic.  Monomial maps act on
the torus; a torus point whose coordinates factor over small primes is kept
as a matrix of prime exponents, so an orbit step is a single integer matrix
product and its height is read off the exponents without forming the
coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .degrees import MonomialMap
from .errors import AllZero, IndeterminatePoint, TooShort
from .numeric import LN2, as_rational
from .projmap import (
    DEFAULT_HEIGHT_CAP,
    HeightValue,
    ProjPoint,
    RationalMap,
    evaluate,
    normalize_point,
    weil_height,
)

_SMALL_PRIMES_BOUND = 10_000


def _small_primes(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(bound ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [p for p in range(bound + 1) if sieve[p]]


_PRIMES = _small_primes(_SMALL_PRIMES_BOUND)


def _factor_smooth(n: int) -> dict[int, int] | None:
    out: dict[int, int] = {}
    for p in _PRIMES:
        if n == 1:
            return out
        if p * p > n:
            if n > _SMALL_PRIMES_BOUND:
                return None
            out[n] = out.get(n, 0) + 1
            return out
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    return out if n == 1 else None


# ---------------------------------------------------------------------------
# torus points


@dataclass(frozen=True)
class TorusPoint:
    """Point of the torus ``x_i = signs[i] * prod_p p^exps[i][p]``.

    Heights are those of ``(1 : x_1 : ... : x_N)`` in P^N.
    """

    signs: tuple[int, ...]
    primes: tuple[int, ...]
    exps: tuple[tuple[int, ...], ...]

    def coords(self) -> tuple[Fraction, ...]:
        out = []
        for s, row in zip(self.signs, self.exps):
            x = Fraction(s)
            for p, e in zip(self.primes, row):
                x *= Fraction(p) ** e
            out.append(x)
        return tuple(out)

    def height(self) -> HeightValue:
        logs = [math.log(p) for p in self.primes]
        arch = max(0.0, max(sum(e * lp for e, lp in zip(row, logs)) for row in self.exps))
        nonarch = sum(
            lp * max(0, max(-row[j] for row in self.exps)) for j, lp in enumerate(logs)
        )
        h = arch + nonarch
        return HeightValue(h, max(h, 1.0))

    def coord_bits(self) -> int:
        # bit length of the largest normalized coordinate, read off the height
        return int(math.floor(self.height().h / LN2 + 1e-9)) + 1

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords()) + ")"


@dataclass(frozen=True)
class RationalTorusPoint:
    """Torus point with explicit rational coordinates (non-smooth fallback)."""

    values: tuple[Fraction, ...]

    def coords(self) -> tuple[Fraction, ...]:
        return self.values

    def height(self) -> HeightValue:
        return weil_height(normalize_point((1,) + self.values))

    def coord_bits(self) -> int:
        return normalize_point((1,) + self.values).coord_bits()

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.values) + ")"


AnyTorusPoint = Union[TorusPoint, RationalTorusPoint]
AnyPoint = Union[ProjPoint, TorusPoint, RationalTorusPoint]


def torus_point(coords: Sequence) -> AnyTorusPoint:
    """Exponent representation when every coordinate is smooth, else explicit."""
    vals = [Fraction(as_rational(x)) for x in coords]
    if any(v == 0 for v in vals):
        raise AllZero("torus coordinates must be nonzero")
    factored = []
    for v in vals:
        num = _factor_smooth(abs(v.numerator))
        den = _factor_smooth(v.denominator)
        if num is None or den is None:
            return RationalTorusPoint(tuple(vals))
        row = dict(num)
        for p, e in den.items():
            row[p] = row.get(p, 0) - e
        factored.append(row)
    primes = tuple(sorted({p for row in factored for p in row}))
    exps = tuple(tuple(row.get(p, 0) for p in primes) for row in factored)
    signs = tuple(1 if v > 0 else -1 for v in vals)
    return TorusPoint(signs, primes, exps)


def apply_monomial(f: MonomialMap, P: AnyTorusPoint) -> AnyTorusPoint:
    A = f.exponent_matrix
    if isinstance(P, TorusPoint):
        cols = list(zip(*P.exps)) if P.primes else []
        new_cols = [f.act(col) for col in cols]
        exps = tuple(tuple(c[i] for c in new_cols) for i in range(f.dim)) if cols else tuple(
            () for _ in range(f.dim)
        )
        signs = tuple(
            -1 if sum(a for a, s in zip(row, P.signs) if s < 0) % 2 else 1 for row in A
        )
        return TorusPoint(signs, P.primes, exps)
    out = []
    for row in A:
        x = Fraction(1)
        for a, v in zip(row, P.values):
            x *= v ** a
        out.append(x)
    return RationalTorusPoint(tuple(out))


# ---------------------------------------------------------------------------
# orbit records


class Termination(enum.Enum):
    COMPLETED = "Completed"
    HIT_INDETERMINACY = "HitIndeterminacy"
    OVERFLOW_GUARD = "OverflowGuard"


@dataclass(frozen=True)
class OrbitRecord:
    """``points[n] = f^n(P)`` with heights; ``stop_index`` is set on early stop."""

    start: AnyPoint
    points: tuple[AnyPoint, ...]
    heights: tuple[HeightValue, ...]
    terminated: Termination
    stop_index: int | None = None

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def h(self) -> list[float]:
        return [x.h for x in self.heights]

    @property
    def h_plus(self) -> list[float]:
        return [x.h_plus for x in self.heights]

    def termination_label(self) -> str:
        if self.stop_index is None:
            return self.terminated.value
        return f"{self.terminated.value}({self.stop_index})"

    def subsample(self, k: int) -> "OrbitRecord":
        """The orbit of ``f^k`` through the same start point."""
        return OrbitRecord(self.start, self.points[::k], self.heights[::k], self.terminated, None)


def compute_orbit(
    f: RationalMap | MonomialMap,
    P: AnyPoint,
    m: int,
    height_cap: float = DEFAULT_HEIGHT_CAP,
) -> OrbitRecord:
    """Iterate ``f`` pointwise up to ``m`` times.

    Stops at an indeterminacy point (``HitIndeterminacy(n)`` with ``f^n(P)``
    in the indeterminacy locus) or when a height exceeds ``height_cap`` nats
    (``OverflowGuard(n)``, the oversized point is not recorded).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    monomial = isinstance(f, MonomialMap)
    if monomial and isinstance(P, ProjPoint):
        raise TypeError("monomial maps act on torus points")
    points = [P]
    heights = [P.height() if monomial else weil_height(P)]
    for n in range(m):
        current = points[-1]
        if monomial:
            nxt = apply_monomial(f, current)
            hv = nxt.height()
        else:
            try:
                nxt = evaluate(f, current)
            except IndeterminatePoint:
                return OrbitRecord(P, tuple(points), tuple(heights), Termination.HIT_INDETERMINACY, n)
            hv = weil_height(nxt)
        if hv.h > height_cap:
            return OrbitRecord(P, tuple(points), tuple(heights), Termination.OVERFLOW_GUARD, n + 1)
        points.append(nxt)
        heights.append(hv)
    return OrbitRecord(P, tuple(points), tuple(heights), Termination.COMPLETED)


# ---------------------------------------------------------------------------
# arithmetic degree


@dataclass(frozen=True)
class ArithDegreeEstimate:
    """Tail statistics of ``h+(f^n P)^(1/n)``; ``alpha_upper_seq[n-1]`` is the n-th term."""

    alpha_upper_seq: tuple[float, ...]
    alpha_bar_est: float
    alpha_lower_est: float
    tail_start: int


def root_sequence(h_plus: Sequence[float]) -> list[float]:
    """``h+_n^(1/n)`` for ``n >= 1``."""
    return [math.exp(math.log(v) / n) for n, v in enumerate(h_plus) if n >= 1]


def _estimate_from_heights(h_plus: Sequence[float]) -> ArithDegreeEstimate:
    if len(h_plus) < 8:
        raise TooShort(f"need at least 8 recorded heights, got {len(h_plus)}")
    m = len(h_plus) - 1
    seq = root_sequence(h_plus)
    tail_start = max(4, m // 2)
    tail = seq[tail_start - 1:]
    return ArithDegreeEstimate(tuple(seq), max(tail), min(tail), tail_start)


def estimate_arith_degree(orbit: OrbitRecord) -> ArithDegreeEstimate:
    """Max and min of ``h+(f^n P)^(1/n)`` over ``n >= max(4, m/2)``."""
    return _estimate_from_heights(orbit.h_plus)


@dataclass(frozen=True)
class UniformBoundFit:
    C0: float


def fit_uniform_bound(f: RationalMap | MonomialMap, sample: Sequence[AnyPoint]) -> UniformBoundFit:
    """Smallest ``C0 >= 1`` with ``h+(f(P)) <= C0 h+(P)`` on the sample."""
    if not sample:
        raise ValueError("empty sample")
    c0 = 1.0
    for P in sample:
        if isinstance(f, MonomialMap):
            hp, hq = P.height().h_plus, apply_monomial(f, P).height().h_plus
        else:
            hp, hq = weil_height(P).h_plus, weil_height(evaluate(f, P)).h_plus
        c0 = max(c0, hq / hp)
    return UniformBoundFit(c0)


@dataclass(frozen=True)
class PowerConsistency:
    k: int
    alpha_f: float
    alpha_fk_root: float
    difference: float
    orbit: OrbitRecord


def check_power_consistency(
    f: RationalMap | MonomialMap,
    P: AnyPoint,
    k: int,
    m: int,
    height_cap: float = DEFAULT_HEIGHT_CAP,
) -> PowerConsistency:
    """Compare the upper arithmetic degree of ``f`` with that of ``f^k`` to the ``1/k``.

    One orbit of ``k*m`` steps of ``f`` is computed; the ``f^k`` estimate uses
    every ``k``-th point of it.
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    orbit = compute_orbit(f, P, k * m, height_cap)
    if orbit.terminated is Termination.HIT_INDETERMINACY:
        raise IndeterminatePoint(f"orbit of {P} meets the indeterminacy locus at n={orbit.stop_index}")
    full = estimate_arith_degree(orbit)
    sub = _estimate_from_heights(orbit.subsample(k).h_plus)
    root = sub.alpha_bar_est ** (1.0 / k)
    return PowerConsistency(k, full.alpha_bar_est, root, abs(full.alpha_bar_est - root), orbit)
