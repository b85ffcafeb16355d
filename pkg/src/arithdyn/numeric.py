"""Exact integers/rationals and logarithms of big-integer magnitudes.

Python ``int`` and :class:`fractions.Fraction` already provide unbounded,
eagerly normalized exact arithmetic, so they serve directly as the exact
integer and rational types, and ``math.log`` already accepts integers of
any size.  This module adds the pieces they lack, chiefly a difference of
logarithms of huge integers that does not cancel catastrophically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from .errors import ZeroLog

try:
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

Rational = Union[int, Fraction]

LN2 = math.log(2.0)
_TOP_BITS = 64


def mantissa_exponent(n: int) -> tuple[float, int]:
    """Split ``|n| = m * 2**e`` with ``m`` in [1, 2) from the top 64 bits.

    Truncating to 64 bits leaves a relative error below 2**-63 in ``m``.
    """
    if n == 0:
        raise ZeroLog("logarithm of zero")
    n = abs(n)
    bits = n.bit_length()
    if bits <= _TOP_BITS:
        top, shift = n, 0
    else:
        shift = bits - _TOP_BITS
        top = n >> shift
    e = bits - 1
    m = math.ldexp(float(top), shift - e)
    if m >= 2.0:  # 64 one-bits round up to 2**64
        m, e = m / 2, e + 1
    return m, e


def log_of_int(n: int) -> float:
    """Natural log of ``|n|``; integers beyond the float range are fine."""
    if n == 0:
        raise ZeroLog("logarithm of zero")
    return math.log(abs(n))


def log_defect(a: int, b: int, delta: int) -> float:
    """``log|a| - delta * log|b|`` without cancellation in the large parts.

    The power-of-two exponents are combined as exact integers first, so the
    result is accurate to a few ulps of its own size even when both logs are
    in the millions.
    """
    ma, ea = mantissa_exponent(a)
    mb, eb = mantissa_exponent(b)
    return (ea - delta * eb) * LN2 + (math.log(ma) - delta * math.log(mb))


def gcd(a: int, b: int) -> int:
    """Nonnegative gcd; ``gcd(0, 0) == 0``."""
    return math.gcd(a, b)


_GMP_BITS = 4096


def _gcd2(a: int, b: int) -> int:
    # CPython's gcd is quadratic; GMP is far faster on million-bit inputs
    if gmpy2 is not None and min(a.bit_length(), b.bit_length()) > _GMP_BITS:
        return int(gmpy2.gcd(a, b))
    return math.gcd(a, b)


def gcd_many(values: Iterable[int]) -> int:
    """gcd of many integers, smallest magnitudes first, stopping at 1."""
    g = 0
    for v in sorted((abs(v) for v in values)):
        g = _gcd2(g, v) if g else v
        if g == 1:
            break
    return g


def lcm_many(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def as_rational(x) -> Rational:
    """Coerce ints, Fractions and ``"a/b"`` strings to an exact number.

    Integral values are returned as ``int``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        q = Fraction(x.strip())
        return q.numerator if q.denominator == 1 else q
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact float coordinate {x!r}")
        return int(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def normalize_rational(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def det_int(rows) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]
