"""Points of P^N(Q), rational self-maps of P^N, and the Weil height."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    AllZero,
    ArityMismatch,
    DegenerateComposite,
    IndeterminatePoint,
    InhomogeneousInput,
)
from .numeric import Rational, as_rational, det_int, gcd_many, lcm_many, log_of_int
from .poly import DEFAULT_TERM_CAP, MultiPoly, compose, divide_exact, gcd_list, parse_poly

DEFAULT_HEIGHT_CAP = 2.0e6
DEFAULT_VAR_NAMES = {1: ("X", "Y"), 2: ("X", "Y", "Z"), 3: ("X", "Y", "Z", "W")}


@dataclass(frozen=True)
class ProjPoint:
    """Canonical integer coordinates: coprime, first nonzero entry positive."""

    coords: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def coord_bits(self) -> int:
        return max(abs(x).bit_length() for x in self.coords)

    def __str__(self):
        return "(" + ":".join(str(x) for x in self.coords) + ")"


@dataclass(frozen=True)
class HeightValue:
    h: float
    h_plus: float


def normalize_point(raw: Sequence) -> ProjPoint:
    """Scale homogeneous rational coordinates to the canonical representative.

    >>> normalize_point([Fraction(-1, 2), Fraction(1, 3)])
    ProjPoint(coords=(3, -2))
    """
    vals = [as_rational(x) for x in raw]
    if not vals:
        raise ArityMismatch("a point needs at least one coordinate")
    if all(v == 0 for v in vals):
        raise AllZero("all homogeneous coordinates are zero")
    den = lcm_many(Fraction(v).denominator for v in vals)
    ints = [int(v * den) for v in vals]
    g = gcd_many(ints)
    if g != 1:
        ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return ProjPoint(tuple(ints))


def weil_height(P: ProjPoint) -> HeightValue:
    """Logarithmic Weil height ``log max|x_i|`` and ``h+ = max(h, 1)``."""
    m = max(abs(x) for x in P.coords)
    h = 0.0 if m == 1 else log_of_int(m)
    return HeightValue(h, max(h, 1.0))


# ---------------------------------------------------------------------------


class MorphismStatus(enum.Enum):
    CERTIFIED_YES = "Certified_Yes"
    CERTIFIED_NO = "Certified_No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True, eq=False)
class RationalMap:
    """A rational self-map of P^N given by coprime forms of a common degree.

    Build instances through :meth:`from_polys` or :meth:`from_strings`, which
    cancel common factors, clear denominators, make the coefficients coprime
    and fix the sign of the graded-lex leading coefficient of the first
    nonzero coordinate.
    """

    coords: tuple[MultiPoly, ...]
    degree: int
    var_names: tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @classmethod
    def from_polys(cls, polys: Sequence[MultiPoly], var_names: Sequence[str] | None = None,
                   *, cancel: bool = True) -> "RationalMap":
        polys = list(polys)
        n = len(polys)
        if n < 2:
            raise ArityMismatch("a self-map of P^N needs at least two coordinates")
        if any(p.nvars != n for p in polys):
            raise ArityMismatch(f"self-map of P^{n - 1} needs forms in {n} variables")
        if var_names is None:
            var_names = DEFAULT_VAR_NAMES.get(n - 1, tuple(f"x{i}" for i in range(n)))
        var_names = tuple(var_names)
        if len(var_names) != n:
            raise ArityMismatch(f"{len(var_names)} variable names for {n} coordinates")
        nonzero = [p for p in polys if not p.is_zero]
        if not nonzero:
            raise DegenerateComposite("all coordinates vanish identically")
        degs = set()
        for p in nonzero:
            if not p.is_homogeneous():
                raise InhomogeneousInput(f"coordinate {p.to_string(var_names)} is not homogeneous")
            degs.add(p.total_degree())
        if len(degs) != 1:
            raise InhomogeneousInput(f"coordinates have different degrees {sorted(degs)}")
        if cancel:
            common = gcd_list(nonzero)
            if not common.is_constant:
                polys = [p if p.is_zero else divide_exact(p, common) for p in polys]
        coeffs = [c for p in polys for c in p.terms.values()]
        den = lcm_many(Fraction(c).denominator for c in coeffs)
        g = Fraction(gcd_many(int(c * den) for c in coeffs), den)
        first = next(p for p in polys if not p.is_zero)
        if first.leading_term()[1] < 0:
            g = -g
        if g != 1:
            polys = [p.scale(1 / g) for p in polys]
        degree = next(p for p in polys if not p.is_zero).total_degree()
        if degree < 1:
            raise DegenerateComposite("map collapses to a constant")
        return cls(tuple(polys), degree, var_names)

    @classmethod
    def from_strings(cls, sources: Sequence[str], var_names: Sequence[str] | None = None) -> "RationalMap":
        n = len(sources)
        if var_names is None:
            var_names = DEFAULT_VAR_NAMES.get(n - 1, tuple(f"x{i}" for i in range(n)))
        return cls.from_polys([parse_poly(s, var_names) for s in sources], var_names)

    @classmethod
    def identity(cls, dim: int, var_names: Sequence[str] | None = None) -> "RationalMap":
        n = dim + 1
        return cls.from_polys([MultiPoly.variable(n, i) for i in range(n)], var_names)

    def to_strings(self) -> list[str]:
        return [p.to_string(self.var_names) for p in self.coords]

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return "(" + " : ".join(self.to_strings()) + ")"

    def __call__(self, P: ProjPoint) -> ProjPoint:
        return evaluate(self, P)


def evaluate(f: RationalMap, P: ProjPoint) -> ProjPoint:
    """Image of ``P``; raises :class:`IndeterminatePoint` if every coordinate vanishes."""
    if len(P.coords) != f.nvars:
        raise ArityMismatch(f"point in P^{P.dim} for a map of P^{f.dim}")
    values = [p.evaluate(P.coords) for p in f.coords]
    if all(v == 0 for v in values):
        raise IndeterminatePoint(f"{P} is an indeterminacy point of the map")
    return normalize_point(values)


def compose_maps(f: RationalMap, g: RationalMap, term_cap: int | None = DEFAULT_TERM_CAP) -> RationalMap:
    """``f o g`` with the common factor of the substituted forms cancelled."""
    if f.nvars != g.nvars:
        raise ArityMismatch(f"cannot compose maps of P^{f.dim} and P^{g.dim}")
    raw = [compose(p, g.coords, term_cap) for p in f.coords]
    if all(p.is_zero for p in raw):
        raise DegenerateComposite("composite has identically vanishing coordinates")
    return RationalMap.from_polys(raw, f.var_names)


def iterates(f: RationalMap, n: int, term_cap: int | None = DEFAULT_TERM_CAP) -> Iterator[RationalMap]:
    """Yield ``f, f^2, ..., f^n``, each computed as ``f o f^(k-1)``."""
    current = f
    yield current
    for _ in range(n - 1):
        current = compose_maps(f, current, term_cap)
        yield current


def iterate_map(f: RationalMap, n: int, term_cap: int | None = DEFAULT_TERM_CAP) -> RationalMap:
    if n < 1:
        raise ValueError("iteration count must be positive")
    for g in iterates(f, n, term_cap):
        pass
    return g


# ---------------------------------------------------------------------------
# morphism certification


def binary_form_coeffs(p: MultiPoly, degree: int) -> list[Rational]:
    """Coefficients ``a_0..a_d`` of ``sum a_i X^(d-i) Y^i``."""
    out: list[Rational] = [0] * (degree + 1)
    for (i, j), c in p.terms.items():
        out[j] = c
    return out


def resultant_binary(F: MultiPoly, G: MultiPoly, deg_f: int, deg_g: int) -> Rational:
    """Sylvester resultant of two binary forms of the stated degrees."""
    a = binary_form_coeffs(F, deg_f)
    b = binary_form_coeffs(G, deg_g)
    den = lcm_many(Fraction(c).denominator for c in a + b)
    a = [int(c * den) for c in a]
    b = [int(c * den) for c in b]
    size = deg_f + deg_g
    if size == 0:
        return 1
    rows = []
    for i in range(deg_g):
        rows.append([0] * i + a + [0] * (size - deg_f - 1 - i))
    for i in range(deg_f):
        rows.append([0] * i + b + [0] * (size - deg_g - 1 - i))
    return Fraction(det_int(rows), den ** size)


def is_morphism(f: RationalMap, box: int = 20) -> MorphismStatus:
    """Three-valued morphism test.

    On P^1 the resultant decides, and a linear map is a morphism exactly when
    its matrix is invertible.  Otherwise a common rational zero found among
    the coordinate points or in the box ``|x_i| <= box`` proves that ``f`` is
    not a morphism, and the answer is ``UNKNOWN`` if none turns up.
    """
    if f.dim == 1:
        F, G = f.coords
        res = resultant_binary(F, G, f.degree, f.degree)
        return MorphismStatus.CERTIFIED_YES if res != 0 else MorphismStatus.CERTIFIED_NO
    if f.degree == 1:
        n = f.nvars
        rows = [[p.terms.get(tuple(int(i == j) for i in range(n)), 0) for j in range(n)] for p in f.coords]
        den = lcm_many(Fraction(c).denominator for r in rows for c in r)
        det = det_int([[int(c * den) for c in r] for r in rows])
        return MorphismStatus.CERTIFIED_YES if det != 0 else MorphismStatus.CERTIFIED_NO

    def vanishes(pt):
        return all(p.evaluate(pt) == 0 for p in f.coords)

    n = f.nvars
    for i in range(n):
        pt = tuple(1 if j == i else 0 for j in range(n))
        if vanishes(pt):
            return MorphismStatus.CERTIFIED_NO
    rng = range(-box, box + 1)
    for pt in itertools.product(rng, repeat=n):
        first = next((x for x in pt if x), 0)
        if first <= 0 or gcd_many(pt) != 1:
            continue
        if vanishes(pt):
            return MorphismStatus.CERTIFIED_NO
    return MorphismStatus.UNKNOWN
