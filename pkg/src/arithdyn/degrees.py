"""Dynamical degree estimates.

Three sources are supported:

* exact degree sequences ``d_n = deg(f^n)`` of maps of P^N, where Fekete's
  lemma turns ``min_n d_n^(1/n)`` into a guaranteed upper bound;
* exponent matrices of monomial maps of the torus;
* user supplied pullback matrices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ArithDynError, BudgetExceeded, SingularMatrix
from .numeric import det_int
from .poly import DEFAULT_TERM_CAP
from .projmap import RationalMap, iterate_map, iterates
from .spectral import SpectralEstimate, as_matrix, gelfand_sequence, spectral_radius


class Stability(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    UNKNOWN = "Unknown"


class DegreeSource(enum.Enum):
    DEGREE_SEQ = "DegreeSeq"
    EXPONENT_MATRIX = "ExponentMatrix"
    USER_MATRIX = "UserMatrix"


@dataclass(frozen=True)
class DegreeSequence:
    """``d[i] = deg(f^(i+1))``; ``truncated`` is set when the term budget ran out."""

    d: tuple[int, ...]
    truncated: bool = False

    @property
    def computed_to(self) -> int:
        return len(self.d)

    def __getitem__(self, n: int) -> int:
        """``d_n`` with 1-based ``n``."""
        return self.d[n - 1]

    def subsample(self, k: int) -> tuple[int, ...]:
        return self.d[k - 1::k]


@dataclass(frozen=True)
class DynDegEstimate:
    """Estimate of the first dynamical degree.

    Only ``upper`` carries a guarantee.  ``lower`` is the heuristic
    ``d_m / d_(m-1)`` for degree sequences and the certified lower end of
    the spectral bracket for the matrix sources.
    """

    lower: float
    upper: float
    stable: Stability
    source: DegreeSource
    value: float
    spectral: SpectralEstimate | None = None
    gelfand: tuple[float, ...] = ()
    per_k_rates: Mapping[int, float] = field(default_factory=dict)


def _check_submultiplicative(d: Sequence[int]) -> None:
    m = len(d)
    for i in range(1, m + 1):
        for j in range(1, m + 1 - i):
            if d[i + j - 1] > d[i - 1] * d[j - 1]:
                raise ArithDynError(
                    f"degree sequence violates d_(i+j) <= d_i d_j at i={i}, j={j}: {d}"
                )


def degree_sequence(f: RationalMap, m: int, term_cap: int | None = DEFAULT_TERM_CAP) -> DegreeSequence:
    """Exact ``deg(f^n)`` for ``n <= m``, cancelling common factors at every step.

    If the term budget is exhausted the prefix computed so far is returned
    with ``truncated=True``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    d: list[int] = []
    truncated = False
    try:
        for g in iterates(f, m, term_cap):
            d.append(g.degree)
            _check_submultiplicative(d)
    except BudgetExceeded:
        truncated = True
    return DegreeSequence(tuple(d), truncated)


def _int_root_or_float(d: int, n: int) -> float:
    if n == 1 or d == 1:
        return float(d)
    r = round(d ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand > 0 and cand ** n == d:
            return float(cand)
    return math.exp(math.log(d) / n)


def estimate_dyndeg(seq: DegreeSequence) -> DynDegEstimate:
    """Fekete upper bound and stability flag from a degree sequence.

    ``Stable`` means ``d_n = d_1^n`` for every recorded ``n`` (at least two
    terms are needed); it cannot exclude a later drop in degree.
    """
    d = seq.d
    if not d:
        raise ValueError("empty degree sequence")
    upper = min(_int_root_or_float(dn, n) for n, dn in enumerate(d, start=1))
    lower = d[-1] / d[-2] if len(d) > 1 else float(d[0])
    if len(d) < 2:
        stable = Stability.UNKNOWN
    elif all(dn == d[0] ** n for n, dn in enumerate(d, start=1)):
        stable = Stability.STABLE
        upper = lower = float(d[0])
    else:
        stable = Stability.UNSTABLE
    return DynDegEstimate(lower, upper, stable, DegreeSource.DEGREE_SEQ, upper)


@dataclass(frozen=True)
class MonomialMap:
    """Monomial map of the torus; row ``i`` holds the exponents of coordinate ``i``.

    ``(x, y) -> (x*y, x)`` is ``[[1, 1], [1, 0]]``.
    """

    exponent_matrix: tuple[tuple[int, ...], ...]

    def __init__(self, exponent_matrix: Sequence[Sequence[int]]):
        A = as_matrix(exponent_matrix)
        if det_int(A) == 0:
            raise SingularMatrix("exponent matrix is singular, the monomial map is not dominant")
        object.__setattr__(self, "exponent_matrix", tuple(tuple(r) for r in A))

    @property
    def dim(self) -> int:
        return len(self.exponent_matrix)

    def act(self, e: Sequence[int]) -> tuple[int, ...]:
        """Image of an exponent vector."""
        return tuple(sum(a * x for a, x in zip(row, e)) for row in self.exponent_matrix)


def _from_spectral(est: SpectralEstimate, source: DegreeSource, gelfand=(), per_k=None) -> DynDegEstimate:
    return DynDegEstimate(
        lower=est.lo,
        upper=max(1.0, est.hi),
        stable=Stability.UNKNOWN,
        source=source,
        value=est.rho,
        spectral=est,
        gelfand=tuple(gelfand),
        per_k_rates=dict(per_k or {}),
    )


def monomial_dyndeg(m: MonomialMap) -> DynDegEstimate:
    """Spectral radius of the exponent matrix."""
    return _from_spectral(spectral_radius(m.exponent_matrix), DegreeSource.EXPONENT_MATRIX)


def matrix_dyndeg(
    M: Sequence[Sequence[int]],
    n_max: int = 32,
    per_k: Mapping[int, Sequence[Sequence[int]]] | None = None,
) -> DynDegEstimate:
    """Dynamical degree from a pullback matrix the caller asserts is stable.

    ``per_k`` optionally maps ``k`` to a separately supplied matrix of
    ``(f^k)^*``; the rates ``rho(M_k)^(1/k)`` are reported for comparison.
    """
    est = spectral_radius(M)
    rates = {1: est.rho}
    for k, Mk in (per_k or {}).items():
        rk = spectral_radius(Mk).rho
        rates[k] = rk ** (1.0 / k) if rk > 0 else 0.0
    return _from_spectral(est, DegreeSource.USER_MATRIX, gelfand_sequence(M, n_max), rates)


def power_degree_consistency(
    f: RationalMap, k: int, m: int, term_cap: int | None = DEFAULT_TERM_CAP
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Degrees of ``(f^k)^n`` for ``n <= m`` next to ``d_k, d_2k, ..., d_mk`` of ``f``.

    The two tuples are equal for every map; a mismatch exposes a bug in the
    composition or cancellation code.
    """
    fk = iterate_map(f, k, term_cap)
    direct = degree_sequence(fk, m, term_cap)
    full = degree_sequence(f, k * m, term_cap)
    return direct.d, full.subsample(k)
