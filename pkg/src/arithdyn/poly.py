"""Sparse multivariate polynomials over Q.

A :class:`MultiPoly` maps exponent tuples to exact coefficients (``int`` or
:class:`~fractions.Fraction`; integral values are always stored as ``int``).
Terms are ordered graded-lexicographically: higher total degree first, ties
broken lexicographically with the first variable largest.

Besides ring arithmetic the module provides

* :func:`parse_poly` / :meth:`MultiPoly.to_string`, a bit-exact round trip
  through the text grammar ``+ - * ^ ( )`` with integer or ``a/b`` literals;
* :func:`compose`, substitution of a tuple of forms into a polynomial;
* :func:`content_and_primitive`;
* :func:`gcd_multi`, a content-recursive gcd built on the subresultant PRS,
  and :func:`gcd_list` which adds a fast modular coprimality certificate in
  front of it.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    InhomogeneousInput,
    NegativeExponent,
    PolySyntaxError,
    UnknownVariable,
    ZeroPolynomial,
)
from .numeric import Rational, gcd_many, lcm_many, normalize_rational

DEFAULT_TERM_CAP = 200_000

Monomial = tuple[int, ...]

# exponent packing for fast products: one 32-bit field per variable
_SHIFT = 32
_MASK = (1 << _SHIFT) - 1


def _pack(e: Monomial) -> int:
    key = 0
    for i, x in enumerate(e):
        key |= x << (_SHIFT * i)
    return key


def _unpack(key: int, nvars: int) -> Monomial:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(nvars))


def _glex_key(e: Monomial):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Rational] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Rational] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ArityMismatch(f"exponent {e} has length {len(e)}, expected {nvars}")
                if c != 0:
                    clean[tuple(e)] = normalize_rational(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        # trusted constructor: no zero coefficients, normalized values
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c: Rational) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def variable(cls, nvars: int, i: int, power: int = 1) -> "MultiPoly":
        e = [0] * nvars
        e[i] = power
        return cls._raw(nvars, {tuple(e): 1})

    # ---- inspection -------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Rational]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    def sorted_terms(self) -> list[tuple[Monomial, Rational]]:
        return sorted(self._terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Monomial, Rational]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self._terms, key=_glex_key)
        return e, self._terms[e]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    # ---- arithmetic -------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = normalize_rational(s)
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> "MultiPoly":
        if c == 0:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(
            self.nvars, {e: normalize_rational(v * c) for e, v in self._terms.items()}
        )

    def mul(self, other: "MultiPoly", term_cap: int | None = None) -> "MultiPoly":
        """Product, aborting with :class:`BudgetExceeded` past ``term_cap`` terms."""
        if other.nvars != self.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
        if not self._terms or not other._terms:
            return MultiPoly.zero(self.nvars)
        a = [(_pack(e), c) for e, c in self._terms.items()]
        b = [(_pack(e), c) for e, c in other._terms.items()]
        if len(a) > len(b):
            a, b = b, a
        acc: dict[int, Rational] = {}
        get = acc.get
        for ka, ca in a:
            for kb, cb in b:
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
            if term_cap is not None and len(acc) > term_cap:
                raise BudgetExceeded(f"intermediate product exceeds {term_cap} terms")
        n = self.nvars
        out = {}
        for k, c in acc.items():
            if c:
                out[_unpack(k, n)] = normalize_rational(c)
        return MultiPoly._raw(n, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.mul(other)

    __rmul__ = __mul__

    def pow(self, k: int, term_cap: int | None = None) -> "MultiPoly":
        if k < 0:
            raise NegativeExponent("negative exponent", 0)
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, term_cap)
            k >>= 1
            if k:
                base = base.mul(base, term_cap)
        return result

    def __pow__(self, k: int):
        return self.pow(k)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            return self._terms == {(0,) * self.nvars: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # ---- evaluation -------------------------------------------------
    def evaluate(self, point: Sequence[Rational]) -> Rational:
        """Exact value at ``point``; powers of each coordinate are cached."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        powers: list[dict[int, Rational]] = [{0: 1, 1: x} for x in point]
        total: Rational = 0
        for e, c in self._terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    pk = cache.get(k)
                    if pk is None:
                        pk = cache[k] = point[i] ** k
                    t = t * pk
            total += t
        return normalize_rational(total)

    # ---- text -------------------------------------------------------
    def to_string(self, var_names: Sequence[str]) -> str:
        if len(var_names) != self.nvars:
            raise ArityMismatch(f"{len(var_names)} names for {self.nvars} variables")
        if not self._terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(var_names, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"MultiPoly({self.to_string(names)!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None:
            if src[pos:].strip() == "":
                break
            # point at the first offending non-space character
            bad = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise PolySyntaxError(f"unexpected character {src[bad]!r}", bad, src)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, var_names: Sequence[str]):
        self.src = src
        self.names = {name: i for i, name in enumerate(var_names)}
        self.nvars = len(var_names)
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return PolySyntaxError(msg, tok[2], self.src)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                raise self.error("implicit multiplication is not allowed; use '*'")
            raise self.error(f"unexpected {tok[1]!r}")
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek()[1] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> MultiPoly:
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[1] == "-":
                raise NegativeExponent("negative exponent", tok[2], self.src)
            if tok[0] != "num":
                raise self.error("exponent must be a nonnegative integer literal")
            self.take()
            base = base.pow(int(tok[1]))
            if self.peek()[1] == "^":
                raise self.error("chained '^' is ambiguous; use parentheses")
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            value: Rational = int(text)
            if self.peek()[1] == "/":
                self.take()
                den = self.peek()
                if den[0] != "num":
                    raise self.error("'/' is only allowed inside a rational literal a/b", den)
                self.take()
                if int(den[1]) == 0:
                    raise PolySyntaxError("zero denominator", den[2], self.src)
                value = Fraction(int(text), int(den[1]))
            return MultiPoly.constant(self.nvars, value)
        if kind == "name":
            if text not in self.names:
                raise UnknownVariable(f"unknown variable {text!r}", pos, self.src)
            return MultiPoly.variable(self.nvars, self.names[text])
        if text == "(":
            p = self.expr()
            close = self.peek()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            self.take()
            return p
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos, self.src)
        raise PolySyntaxError(f"unexpected {text!r}", pos, self.src)


def parse_poly(src: str, var_names: Sequence[str]) -> MultiPoly:
    """Parse and expand a polynomial written with explicit ``*`` and ``^``.

    >>> parse_poly("(X+Y)^2", ["X", "Y"]).to_string(["X", "Y"])
    'X^2 + 2*X*Y + Y^2'
    """
    return _Parser(src, list(var_names)).parse()


# ---------------------------------------------------------------------------
# composition


def compose(
    f: MultiPoly, g: Sequence[MultiPoly], term_cap: int | None = DEFAULT_TERM_CAP
) -> MultiPoly:
    """Substitute the forms ``g`` for the variables of ``f``.

    All ``g_i`` must share one nvars and be homogeneous of a common degree
    (zero forms are allowed).
    """
    if len(g) != f.nvars:
        raise ArityMismatch(f"{len(g)} substitutions for {f.nvars} variables")
    if not g:
        raise ArityMismatch("empty substitution")
    m = g[0].nvars
    degs = set()
    for gi in g:
        if gi.nvars != m:
            raise ArityMismatch("substituted forms live in different rings")
        if not gi.is_homogeneous():
            raise InhomogeneousInput("substituted polynomial is not homogeneous")
        if not gi.is_zero:
            degs.add(gi.total_degree())
    if len(degs) > 1:
        raise InhomogeneousInput(f"substituted forms have different degrees {sorted(degs)}")

    cache: list[dict[int, MultiPoly]] = [{1: gi} for gi in g]

    def power(i: int, k: int) -> MultiPoly:
        c = cache[i]
        if k not in c:
            half = power(i, k // 2)
            p = half.mul(half, term_cap)
            if k % 2:
                p = p.mul(g[i], term_cap)
            c[k] = p
        return c[k]

    acc: dict[Monomial, Rational] = {}
    for e, c in f.sorted_terms():
        t = MultiPoly.constant(m, c)
        for i, k in enumerate(e):
            if k:
                t = t.mul(power(i, k), term_cap)
        for em, cm in t.terms.items():
            s = acc.get(em, 0) + cm
            if s:
                acc[em] = s
            else:
                acc.pop(em, None)
        if term_cap is not None and len(acc) > term_cap:
            raise BudgetExceeded(f"composition exceeds {term_cap} terms")
    return MultiPoly(m, acc)


# ---------------------------------------------------------------------------
# content and gcd


@dataclass(frozen=True)
class PolyContent:
    rational_content: Rational
    primitive_part: MultiPoly


def content_and_primitive(f: MultiPoly) -> PolyContent:
    """Split ``f = content * primitive`` with integral coprime primitive part.

    The primitive part has a positive graded-lex leading coefficient, so the
    sign lives in the content.
    """
    if f.is_zero:
        raise ZeroPolynomial("content of the zero polynomial")
    coeffs = list(f.terms.values())
    den = lcm_many(Fraction(c).denominator for c in coeffs)
    ints = [int(c * den) for c in coeffs]
    g = gcd_many(ints)
    content = Fraction(g, den)
    if f.leading_term()[1] < 0:
        content = -content
    prim = {e: normalize_rational(c / content) for e, c in f.terms.items()}
    return PolyContent(normalize_rational(content), MultiPoly._raw(f.nvars, prim))


def primitive(f: MultiPoly) -> MultiPoly:
    return content_and_primitive(f).primitive_part


def divide_exact(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Quotient ``f / g``; raises ``ValueError`` if the division leaves a remainder."""
    if g.is_zero:
        raise ZeroPolynomial("division by the zero polynomial")
    n = f.nvars
    lead_e, lead_c = g.leading_term()
    rem = dict(f.terms)
    gterms = list(g.terms.items())
    quot: dict[Monomial, Rational] = {}
    while rem:
        e = max(rem, key=_glex_key)
        c = rem[e]
        shift = tuple(a - b for a, b in zip(e, lead_e))
        if any(s < 0 for s in shift):
            raise ValueError("polynomial division is not exact")
        qc = normalize_rational(Fraction(c) / lead_c) if not (
            isinstance(c, int) and isinstance(lead_c, int) and c % lead_c == 0
        ) else c // lead_c
        quot[shift] = qc
        for ge, gc in gterms:
            k = tuple(a + b for a, b in zip(ge, shift))
            s = rem.get(k, 0) - qc * gc
            if s:
                rem[k] = normalize_rational(s)
            else:
                rem.pop(k, None)
    return MultiPoly._raw(n, quot)


def _coeffs_in(f: MultiPoly, v: int) -> dict[int, MultiPoly]:
    out: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = e[v]
        e2 = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[e2] = c
    return {k: MultiPoly._raw(f.nvars, t) for k, t in out.items()}


def _lc_in(f: MultiPoly, v: int) -> MultiPoly:
    d = f.degree_in(v)
    return MultiPoly._raw(
        f.nvars, {e[:v] + (0,) + e[v + 1:]: c for e, c in f.terms.items() if e[v] == d}
    )


def _prem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    db = b.degree_in(v)
    lcb = _lc_in(b, v)
    r = a
    e = a.degree_in(v) - db + 1
    while not r.is_zero and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        s = _lc_in(r, v) * MultiPoly.variable(r.nvars, v, dr - db)
        r = lcb * r - s * b
        e -= 1
    if e > 0:
        r = lcb.pow(e) * r
    return r


def _content_in(f: MultiPoly, v: int) -> MultiPoly:
    coeffs = sorted(_coeffs_in(f, v).values(), key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant:
            break
        g = _gcd_rec(g, c)
    return primitive(g) if not g.is_constant else MultiPoly.constant(f.nvars, 1)


def _subresultant_gcd(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    one = MultiPoly.constant(a.nvars, 1)
    g = h = one
    while True:
        d = a.degree_in(v) - b.degree_in(v)
        r = _prem(a, b, v)
        if r.is_zero:
            return b
        if r.degree_in(v) == 0:
            return one
        a, b = b, divide_exact(r, g * h.pow(d))
        g = _lc_in(a, v)
        if d:
            h = divide_exact(g.pow(d), h.pow(d - 1))


def _gcd_rec(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive gcd of two nonzero integral polynomials."""
    n = f.nvars
    one = MultiPoly.constant(n, 1)
    if f.is_constant or g.is_constant:
        return one
    f, g = primitive(f), primitive(g)
    vs = f.variables() | g.variables()
    v = max(vs, key=lambda i: (max(f.degree_in(i), g.degree_in(i)), -i))
    cf, cg = _content_in(f, v), _content_in(g, v)
    pf, pg = divide_exact(f, cf), divide_exact(g, cg)
    c = _gcd_rec(cf, cg)
    if pf.degree_in(v) <= 0 or pg.degree_in(v) <= 0:
        h = one
    else:
        h = _subresultant_gcd(pf, pg, v)
        if h.degree_in(v) > 0:
            h = divide_exact(h, _content_in(h, v))
        else:
            h = one
    return primitive(c * h)


def gcd_multi(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """gcd of two nonzero polynomials over Q.

    Normalized to integral coprime coefficients with a positive graded-lex
    leading coefficient.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomial("gcd with the zero polynomial")
    if f.nvars != g.nvars:
        raise ArityMismatch(f"{f.nvars} vs {g.nvars} variables")
    return _gcd_rec(primitive(f), primitive(g))


# ---- gcd of many, with a modular shortcut ---------------------------------

_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579)


def _poly_mod_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    # dense coefficient lists, lowest degree first
    def trim(x):
        while x and x[-1] % p == 0:
            x.pop()
        return x

    a, b = trim([c % p for c in a]), trim([c % p for c in b])
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            q = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - q * c) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _specialize(f: MultiPoly, v: int, values: Sequence[int], p: int) -> list[int]:
    out = [0] * (f.degree_in(v) + 1)
    for e, c in f.terms.items():
        t = int(c) % p
        for i, k in enumerate(e):
            if i != v and k:
                t = t * pow(values[i], k, p) % p
        out[e[v]] = (out[e[v]] + t) % p
    return out


def _certainly_coprime(polys: Sequence[MultiPoly], rng: random.Random) -> bool:
    """True only if the primitive gcd of integral ``polys`` is provably 1.

    For every variable ``v`` the others are specialized at random residues
    mod a large prime.  When some input keeps its ``v``-degree and the
    univariate gcd mod p is constant, the true gcd has ``v``-degree 0.
    """
    n = polys[0].nvars
    for v in range(n):
        if any(p.degree_in(v) == 0 for p in polys):
            continue
        ok = False
        for prime in _PRIMES[:2]:
            values = [rng.randrange(1, prime) for _ in range(n)]
            reductions = [_specialize(p, v, values, prime) for p in polys]
            anchor = None
            for p, red in zip(polys, reductions):
                if red[-1] % prime:
                    anchor = red
                    break
            if anchor is None:
                continue
            g = anchor
            for red in reductions:
                g = _poly_mod_gcd(g, red, prime)
                if len(g) <= 1:
                    break
            if len(g) <= 1:
                ok = True
                break
        if not ok:
            return False
    return True


def gcd_list(polys: Iterable[MultiPoly], seed: int = 0) -> MultiPoly:
    """Primitive gcd of several polynomials (zero entries are ignored)."""
    polys = [primitive(p) for p in polys if not p.is_zero]
    if not polys:
        raise ZeroPolynomial("gcd of zero polynomials")
    n = polys[0].nvars
    low = tuple(min(e[i] for p in polys for e in p.terms) for i in range(n))
    mono = MultiPoly._raw(n, {low: 1})
    if any(low):
        polys = [
            MultiPoly._raw(n, {tuple(a - b for a, b in zip(e, low)): c for e, c in p.terms.items()})
            for p in polys
        ]
    if len(polys) == 1:
        return primitive(polys[0]) * mono
    if _certainly_coprime(polys, random.Random(seed)):
        return mono
    g = polys[0]
    for p in polys[1:]:
        g = gcd_multi(g, p)
        if g.is_constant:
            break
    return primitive(g * mono)
