"""Field, polynomial, and parser tests."""

import pytest
from hypothesis import given, settings, strategies as st

from tatesplice.arith import (
    Polynomial,
    PrimeField,
    VariableContext,
    grevlex_key,
    parse_polynomial,
    poly_arith,
    total_degree,
)
from tatesplice.errors import (
    ContextMismatchError,
    NegativeExponentError,
    PolynomialSyntaxError,
    UnknownVariableError,
)

F101 = PrimeField(101)
XYZ = VariableContext(["x", "y", "z"])
XY = VariableContext(["x", "y"])


def poly(s, ctx=XYZ, field=F101):
    return parse_polynomial(s, ctx, field)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(91)
    with pytest.raises(ValueError):
        PrimeField(1)
    assert PrimeField(2).p == 2
    assert PrimeField(32003).p == 32003


def test_parse_basic_terms():
    p = poly("x^2*y - 3*z")
    assert p.terms == {(2, 1, 0): 1, (0, 0, 1): 98}


def test_parse_zero():
    assert poly("0").terms == {}


def test_parse_expand_cancel():
    p = parse_polynomial("(x+y)*(x-y)", XY, F101)
    assert p.terms == {(2, 0): 1, (0, 2): 100}


def test_parse_errors_carry_offsets():
    with pytest.raises(UnknownVariableError) as e:
        poly("x + w^2")
    assert e.value.offset == 4
    with pytest.raises(PolynomialSyntaxError) as e:
        poly("x + * y")
    assert e.value.offset == 4
    with pytest.raises(NegativeExponentError):
        poly("x^-2")
    with pytest.raises(PolynomialSyntaxError):
        poly("(x + y")
    with pytest.raises(PolynomialSyntaxError):
        poly("x $ y")


def test_poly_arith_examples():
    assert poly_arith(poly("x^2"), poly("y^2"), "mul") == poly("x^2*y^2")
    assert poly_arith(poly("x + y"), poly("-x - y"), "add").is_zero()
    f2 = PrimeField(2)
    s = parse_polynomial("x + y", XY, f2)
    assert poly_arith(s, s, "mul") == parse_polynomial("x^2 + y^2", XY, f2)


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        poly_arith(poly("x"), parse_polynomial("x", XY, F101), "add")


def test_total_degree():
    assert total_degree(poly("x^2*y")) == 3
    assert total_degree(poly("5")) == 0
    assert total_degree(poly("0")) is None


def test_grevlex_order():
    # x > y > z in equal degree; x*y^2 beats x^2*z in grevlex
    assert grevlex_key((1, 0, 0)) > grevlex_key((0, 1, 0)) > grevlex_key((0, 0, 1))
    assert grevlex_key((1, 2, 0)) > grevlex_key((2, 0, 1))


def test_printing_descending_order():
    p = poly("z + x^2 + y^2*x")
    assert str(p) == "x*y^2 + x^2 + z"


def _random_poly(draw, ctx, field, max_deg=3, max_terms=4):
    n = ctx.nvars
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        expo = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms[expo] = draw(st.integers(0, field.p - 1))
    return Polynomial(ctx, field, terms)


@st.composite
def polys(draw, ctx=XYZ, field=F101):
    return _random_poly(draw, ctx, field)


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys())
@settings(max_examples=60, deadline=None)
def test_parse_print_roundtrip(a):
    assert parse_polynomial(str(a), XYZ, F101) == a


@st.composite
def homogeneous_polys(draw, degree, ctx=XYZ, field=F101):
    from tatesplice.groebner import monomials_of_degree

    monos = monomials_of_degree(ctx.nvars, degree)
    terms = {}
    for m in monos:
        terms[m] = draw(st.integers(0, field.p - 1))
    return Polynomial(ctx, field, terms)


@given(homogeneous_polys(2), homogeneous_polys(2), homogeneous_polys(3))
@settings(max_examples=30, deadline=None)
def test_homogeneity_preserved(a, b, c):
    assert (a * c).is_homogeneous()
    assert (a + b).is_homogeneous()
    s = a * a + c  # mixing degrees 4 and 3
    if not a.is_zero() and not c.is_zero():
        assert not s.is_homogeneous()


def test_parenthesized_power():
    p = parse_polynomial("(x + y)^2", XY, F101)
    assert p == parse_polynomial("x^2 + 2*x*y + y^2", XY, F101)
