from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slant_hankel.operators import apply, slant_hankel
from slant_hankel.scalars import I, ONE, Scalar, parse_rational
from slant_hankel.symbols import (
    FourierVector,
    LaurentSymbol,
    SymbolParseError,
    basis,
    conjugate,
    constant,
    format_terms,
    l2_norm_sq,
    monomial,
    pretty,
    slant_transform,
    substitute_neg_k,
    sup_norm_estimate,
    sym_add,
    sym_equal,
    sym_mul,
)

from conftest import orders, scalars, symbols


def poly(**terms):
    """One-variable symbol from keyword exponents, e.g. poly(p0=1, m2=3) = 1 + 3 z^-2."""
    out = {}
    for key, c in terms.items():
        e = int(key[1:]) * (-1 if key[0] == "m" else 1)
        out[(e,)] = c
    return LaurentSymbol(1, out)


# -- scalars ------------------------------------------------------------------


def test_scalar_arithmetic_is_exact():
    a = Scalar(Fraction(1, 3), 2)
    b = Scalar(-1, Fraction(1, 2))
    assert (a * b) / b == a
    assert a + b - b == a
    assert I * I == -ONE
    assert Scalar(3, 4).abs_sq() == 25
    assert Scalar(1, -1).conjugate() == Scalar(1, 1)


def test_scalar_text_round_trip():
    for s in [Scalar(Fraction(1, 2), -3), Scalar(0, 0), Scalar(-7, Fraction(5, 9))]:
        assert Scalar.parse(s.format()) == s
    assert Scalar(Fraction(1, 2), -3).format() == "1/2-3 i"


def test_decimals_rejected():
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(TypeError):
        Scalar(0.5)


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


# -- worked examples ----------------------------------------------------------------


def test_mul_and_add_examples():
    assert sym_mul(poly(p1=1), poly(m1=1)) == constant(1, 1)
    assert sym_mul(poly(p0=1, p1=1), poly(p0=1, p1=-1)) == poly(p0=1, p2=-1)
    zero = sym_add(poly(p2=1), poly(p2=-1))
    assert zero.is_zero() and dict(zero.coeffs) == {}
    z1 = monomial((1, 0))
    assert sym_mul(z1, monomial((-1, 0))) == constant(1, 2)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        sym_mul(monomial((1,)), monomial((1, 0)))
    with pytest.raises(ValueError):
        sym_add(monomial((1,)), monomial((1, 0)))


def test_conjugate_examples():
    assert conjugate(monomial((1,), I)) == monomial((-1,), -I)
    assert conjugate(constant(3, 1)) == constant(3, 1)
    phi = LaurentSymbol(2, {(1, 0): 2, (0, -1): 1})
    assert conjugate(phi) == LaurentSymbol(2, {(-1, 0): 2, (0, 1): 1})


def test_substitute_examples():
    assert substitute_neg_k(poly(p1=1), 2) == poly(m2=1)
    assert substitute_neg_k(monomial((1, -1)), 3) == monomial((-3, 3))
    assert substitute_neg_k(poly(p0=1, p2=1), 2) == poly(p0=1, m4=1)


def test_slant_transform_examples():
    assert slant_transform(poly(p4=1, p3=1), 2) == poly(m2=1)
    assert slant_transform(constant(Scalar(2, 1), 1), 2) == constant(Scalar(2, 1), 1)
    phi = monomial((2, -4))
    assert slant_transform(phi, 2) == monomial((-1, 2))
    # brute-force oracle: V M_phi e_0
    assert apply(slant_hankel(phi, 2), basis((0, 0))) == FourierVector(2, {(-1, 2): 1})


def test_order_must_be_at_least_two():
    for bad in (0, 1):
        with pytest.raises(ValueError):
            substitute_neg_k(poly(p1=1), bad)
        with pytest.raises(ValueError):
            slant_transform(poly(p1=1), bad)


def test_l2_examples():
    assert l2_norm_sq(poly(p1=3)) == 9
    assert l2_norm_sq(poly(p1=1, m1=1)) == 2
    assert l2_norm_sq(LaurentSymbol.zero(1)) == 0


def test_sup_norm_examples():
    assert sup_norm_estimate(constant(5, 1), 7) == pytest.approx(5.0)
    assert sup_norm_estimate(poly(p1=1), 64) == pytest.approx(1.0)
    assert abs(sup_norm_estimate(poly(p0=1, p1=1), 256) - 2.0) < 1e-3
    assert sup_norm_estimate(LaurentSymbol.zero(2), 4) == 0.0
    # lower bound of the true maximum |1 + z1 + z2| = 3
    assert sup_norm_estimate(LaurentSymbol(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1}), 16) <= 3.0 + 1e-12
    with pytest.raises(ValueError):
        sup_norm_estimate(poly(p1=1), 0)


def test_sym_equal_examples():
    assert sym_equal(sym_mul(poly(p1=1), poly(m1=1)), constant(1, 1))
    assert not sym_equal(poly(p1=1), poly(m1=1))
    assert sym_equal(LaurentSymbol.zero(1), LaurentSymbol(1, {}))
    assert sym_equal(LaurentSymbol(1, {(3,): 0}), LaurentSymbol.zero(1))


# -- properties ---------------------------------------------------------------------


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(symbols(n), symbols(n), symbols(n))))
def test_ring_axioms(triple):
    a, b, c = triple
    assert sym_mul(a, b) == sym_mul(b, a)
    assert sym_mul(sym_mul(a, b), c) == sym_mul(a, sym_mul(b, c))
    assert sym_mul(a, sym_add(b, c)) == sym_add(sym_mul(a, b), sym_mul(a, c))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(symbols(n), symbols(n))), orders)
def test_conjugate_and_substitution_are_homomorphisms(pair, k):
    a, b = pair
    assert conjugate(conjugate(a)) == a
    assert conjugate(sym_mul(a, b)) == sym_mul(conjugate(a), conjugate(b))
    assert substitute_neg_k(sym_mul(a, b), k) == sym_mul(substitute_neg_k(a, k), substitute_neg_k(b, k))


@given(st.integers(1, 3).flatmap(symbols), orders)
def test_slant_transform_matches_operator_on_e0(phi, k):
    n = phi.dim
    image = apply(slant_hankel(phi, k), basis((0,) * n))
    assert dict(image.coeffs) == dict(slant_transform(phi, k).coeffs)


@given(st.integers(1, 3).flatmap(symbols))
def test_constant_term_of_modulus_squared(phi):
    sq = sym_mul(phi, conjugate(phi))
    assert sq[(0,) * phi.dim] == l2_norm_sq(phi)


@given(st.integers(1, 3).flatmap(symbols))
def test_text_round_trip(phi):
    text = format_terms(phi)
    if phi.is_zero():
        assert text == ""
        assert LaurentSymbol.from_text(text, dim=phi.dim) == phi
    else:
        assert LaurentSymbol.from_text(text) == phi


# -- file format ----------------------------------------------------------------------


def test_parse_format_details():
    text = """
    # a comment
    (0,1) : 1/2 -3   # trailing comment
    (0,1) : 1/2 3
    (−1,0) : 0 1
    """
    phi = LaurentSymbol.from_text(text)
    assert phi == LaurentSymbol(2, {(0, 1): 1, (-1, 0): I})
    assert LaurentSymbol.from_text("(1) : 1 0; (2) : 2 0") == poly(p1=1, p2=2)


@pytest.mark.parametrize(
    "text, line",
    [
        ("(1) : 1 0\n(1,2) : 1 0", 2),
        ("(1) 1 0", 1),
        ("\n\n(1) : 1", 3),
        ("(1) : 0.5 0", 1),
        ("(x) : 1 0", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(SymbolParseError) as info:
        LaurentSymbol.from_text(text, source="f.sym")
    assert info.value.line == line
    assert "f.sym" in str(info.value)


def test_empty_input_needs_dimension():
    with pytest.raises(SymbolParseError):
        LaurentSymbol.from_text("# nothing\n")
    assert LaurentSymbol.from_text("", dim=2) == LaurentSymbol.zero(2)


def test_pretty():
    assert pretty(poly(p1=1, m2=-1)) == "-z^-2 + z"
    assert pretty(LaurentSymbol.zero(1)) == "0"
