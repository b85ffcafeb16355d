import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from arithdyn.errors import (
    ArityMismatch,
    BudgetExceeded,
    InhomogeneousInput,
    NegativeExponent,
    PolySyntaxError,
    UnknownVariable,
    ZeroPolynomial,
)
from arithdyn.poly import (
    MultiPoly,
    compose,
    content_and_primitive,
    divide_exact,
    gcd_list,
    gcd_multi,
    parse_poly,
)

XYZ = ["X", "Y", "Z"]
XY = ["X", "Y"]
SX, SY, SZ = sympy.symbols("X Y Z")


def P(src, names=XYZ):
    return parse_poly(src, names)


def to_sympy(p, names=XYZ):
    syms = sympy.symbols(names)
    return sympy.expand(sum(c * sympy.prod([s**k for s, k in zip(syms, e)]) for e, c in p.terms.items()))


def test_parse_monomial():
    p = P("Y*Z")
    assert dict(p.terms) == {(0, 1, 1): 1}


def test_parse_henon_coordinate():
    p = P("Y^2 - X*Z - Z^2")
    assert len(p) == 3
    assert all(sum(e) == 2 for e in p.terms)


def test_binomial_cube():
    p = P("(X+Y)^3", XY)
    assert p.to_string(XY) == "X^3 + 3*X^2*Y + 3*X*Y^2 + Y^3"
    assert to_sympy(p, XY) == sympy.expand((SX + SY) ** 3)


def test_parse_rational_coefficients():
    p = P("1/2*X^2 - 3/4*Y*Z + (X - Z)*Y")
    assert to_sympy(p) == sympy.expand(sympy.Rational(1, 2) * SX**2 - sympy.Rational(3, 4) * SY * SZ + (SX - SZ) * SY)


@pytest.mark.parametrize(
    "src, exc, pos",
    [
        ("X Y", PolySyntaxError, 2),
        ("2X", PolySyntaxError, 1),
        ("X^2^3", PolySyntaxError, 3),
        ("X + ", PolySyntaxError, 4),
        ("X/Y", PolySyntaxError, 1),
        ("1/0*X", PolySyntaxError, 2),
        ("(X + Y", PolySyntaxError, 6),
        ("X + W", UnknownVariable, 4),
        ("X^-2", NegativeExponent, 2),
    ],
)
def test_parse_errors(src, exc, pos):
    with pytest.raises(exc) as info:
        P(src)
    assert info.value.pos == pos


def test_to_string_round_trip():
    for src in ["Y*Z", "Y^2 - X*Z - Z^2", "-X^3 + 1/2*X*Y*Z", "0"]:
        p = P(src)
        assert P(p.to_string(XYZ)) == p
    assert P("0").to_string(XYZ) == "0"


def test_compose_examples():
    g = [P("Y*Z"), P("X*Z"), P("Z^2")]
    assert compose(P("X"), g) == P("Y*Z")
    assert compose(P("X*Y"), g) == P("X*Y*Z^2")
    assert compose(P("X^2 + Y*Z"), [P("Y"), P("Z"), P("X")]) == P("Y^2 + X*Z")


def test_compose_substitution_oracle():
    f = P("X^2 + Y*Z")
    g = [P("Y"), P("Z"), P("X")]
    h = compose(f, g)
    rng = random.Random(1)
    for _ in range(20):
        pt = [rng.randint(-50, 50) for _ in range(3)]
        assert h.evaluate(pt) == f.evaluate([gi.evaluate(pt) for gi in g])


def test_compose_checks_inputs():
    with pytest.raises(ArityMismatch):
        compose(P("X"), [P("X"), P("Y")])
    with pytest.raises(InhomogeneousInput):
        compose(P("X"), [P("X^2 + Y"), P("Y"), P("Z")])
    with pytest.raises(InhomogeneousInput):
        compose(P("X"), [P("X^2"), P("Y"), P("Z")])


def test_term_cap():
    p = P("X + Y + Z + 1")
    with pytest.raises(BudgetExceeded):
        p.pow(12, term_cap=50)


@pytest.mark.parametrize(
    "src, content, prim",
    [
        ("6*X + 4*Y", 2, "3*X + 2*Y"),
        ("1/2*X^2", sympy.Rational(1, 2), "X^2"),
        ("15*X^2 - 25*X*Y + 10*Y^2", 5, "3*X^2 - 5*X*Y + 2*Y^2"),
        ("-2*X + 4*Y", -2, "X - 2*Y"),
    ],
)
def test_content(src, content, prim):
    pc = content_and_primitive(P(src, XY))
    assert pc.rational_content == content
    assert pc.primitive_part == P(prim, XY)


def test_content_of_zero():
    with pytest.raises(ZeroPolynomial):
        content_and_primitive(MultiPoly.zero(2))


@pytest.mark.parametrize(
    "a, b, g",
    [
        ("X^2", "X*Y", "X"),
        ("X^2 - Y^2", "X^2 + 2*X*Y + Y^2", "X + Y"),
        ("X*Y + Z^2", "X + Y", "1"),
        ("X^2*Y*Z", "X*Y^2*Z", "X*Y*Z"),
    ],
)
def test_gcd_examples(a, b, g):
    assert gcd_multi(P(a), P(b)) == P(g)
    assert gcd_list([P(a), P(b)]) == P(g)


def test_gcd_of_cremona_square():
    raw = [P("X^2*Y*Z"), P("X*Y^2*Z"), P("X*Y*Z^2")]
    assert gcd_list(raw) == P("X*Y*Z")


def test_divide_exact():
    assert divide_exact(P("X^2 - Y^2"), P("X - Y")) == P("X + Y")
    with pytest.raises(ValueError):
        divide_exact(P("X^2 + Y^2"), P("X - Y"))


small_forms = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4
)


def _form(spec, d=2):
    terms = {}
    for i, j, c in spec:
        if c and i + j <= d:
            e = (i, j, d - i - j)
            terms[e] = terms.get(e, 0) + c
    return MultiPoly(3, terms)


@settings(max_examples=60, deadline=None)
@given(small_forms, small_forms, small_forms)
def test_gcd_against_sympy(a, b, c):
    fa, fb, fc = _form(a), _form(b), _form(c, 1)
    if fa.is_zero or fb.is_zero or fc.is_zero:
        return
    A, B = fa * fc, fb * fc
    g = gcd_list([A, B])
    expected = sympy.Poly(sympy.gcd(to_sympy(A), to_sympy(B)), SX, SY, SZ)
    got = sympy.Poly(to_sympy(g), SX, SY, SZ)
    assert sympy.simplify(got.as_expr() / expected.as_expr()).is_number


@settings(max_examples=40, deadline=None)
@given(small_forms, small_forms)
def test_multiplication_matches_sympy(a, b):
    fa, fb = _form(a), _form(b)
    assert to_sympy(fa * fb) == sympy.expand(to_sympy(fa) * to_sympy(fb))
