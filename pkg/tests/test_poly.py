"""Ring arithmetic, truncation quotients, series windows, JSON format."""

import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vexillary.poly import (Polynomial, PolynomialError, USeries, WindowError,
                            b, beta, const, determinant, formal_bar, m, one,
                            poly_from_json, poly_to_json, t, useries_coeff,
                            useries_mul, useries_reciprocal, x, zero)


# -- strategies ---------------------------------------------------------------

_VARS = [x(1), x(2), b(1), beta()]


@st.composite
def polys(draw, max_terms=4, max_exp=3, with_trunc=True):
    nterms = draw(st.integers(0, max_terms))
    p = zero()
    for _ in range(nterms):
        c = draw(st.integers(-3, 3))
        term = const(c)
        for v in _VARS:
            e = draw(st.integers(0, max_exp))
            if e:
                term = term * v ** e
        p = p + term
    if with_trunc and draw(st.booleans()):
        p = p.truncated(draw(st.integers(0, 5)))
    return p


# -- basic arithmetic ---------------------------------------------------------

def test_unit_and_zero():
    p = x(1) + b(1)
    assert p * one() == p
    assert (p * 1) == p
    assert p + zero() == p
    assert p * 0 == zero()
    assert p - p == zero()


def test_truncation_quotient():
    p = x(1).truncated(1)
    assert (p * p).is_zero()
    q = (one() + beta() * x(1)) * (one() - beta() * x(1))
    assert q == one() - beta() ** 2 * x(1) ** 2


def test_beta_does_not_truncate():
    p = (beta() ** 5 * x(1)).truncated(1)
    assert not p.is_zero()
    assert p.xbt_degree() == 1


@settings(max_examples=200, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, bb, c):
    assert a + bb == bb + a
    assert a * bb == bb * a
    assert (a + bb) + c == a + (bb + c)
    assert (a * bb) * c == a * (bb * c)
    assert a * (bb + c) == a * bb + a * c


@settings(max_examples=150, deadline=None)
@given(polys(with_trunc=False), polys(with_trunc=False), st.integers(0, 4))
def test_truncation_naturality(a, bb, d):
    full = (a * bb).truncated(d)
    cut = (a.truncated(d) * bb.truncated(d)).truncated(d)
    assert full == cut


@settings(max_examples=150, deadline=None)
@given(polys(with_trunc=False), polys(with_trunc=False),
       st.sampled_from([(2, 0), (2, 1)]),
       st.integers(-2, 2))
def test_substitute_is_homomorphism(a, bb, var, val):
    assert (a * bb).substitute(var, val) == \
        a.substitute(var, val) * bb.substitute(var, val)
    assert (a + bb).substitute(var, val) == \
        a.substitute(var, val) + bb.substitute(var, val)


def test_substitute_examples():
    p = x(1) + b(1) + beta() * x(1) * b(1)
    assert p.substitute((2, 0), 0) == x(1) + b(1)
    assert (beta() ** 2).substitute((2, 0), -1) == one()
    # substitution never mutates the input
    q = p.substitute((2, 0), 0)
    assert p != q
    assert p.substitute((2, 0), -1) != q


def test_substitute_by_polynomial():
    p = x(1) ** 2 + b(1)
    res = p.substitute((0, 1), x(2) + b(2))
    assert res == (x(2) + b(2)) ** 2 + b(1)


def test_powers():
    assert x(1) ** 0 == one()
    assert (x(1) + 1) ** 2 == x(1) ** 2 + 2 * x(1) + 1
    with pytest.raises(PolynomialError):
        x(1) ** -1


def test_fraction_coefficients():
    p = Fraction(1, 2) * x(1) + Fraction(1, 2) * x(1)
    assert p == x(1)
    assert p.is_integral()
    assert not (Fraction(1, 3) * x(1)).is_integral()


def test_homogeneity_checker():
    # x/b/t weigh +1, B weighs -1, m_i weighs -i
    p = x(1) + b(1) + beta() * x(1) * b(1)
    assert p.homogeneous_degree() == 1
    assert (m(2) * x(1) ** 3).homogeneous_degree() == 1
    assert (t(1) * x(1)).homogeneous_degree() == 2
    assert (x(1) + x(1) * x(2)).homogeneous_degree() is None
    assert zero().homogeneous_degree() == 0


def test_mcap_is_an_ideal():
    p = (m(1) + m(2)).truncated(None, 1)
    assert p == m(1)
    q = m(1).truncated(None, 1) * m(1)
    assert q.is_zero()


# -- formal_bar ---------------------------------------------------------------

def test_formal_bar_examples():
    assert formal_bar(x(1), 2) == -x(1) + beta() * x(1) ** 2
    assert formal_bar(zero(), 5) == zero()
    assert formal_bar(formal_bar(x(1), 3), 3) == x(1).truncated(3)


def test_formal_bar_rejects_constant_term():
    with pytest.raises(PolynomialError):
        formal_bar(one() + x(1), 3)


# -- determinant --------------------------------------------------------------

def _leibniz(matrix):
    d = len(matrix)
    total = zero()
    for perm in itertools.permutations(range(d)):
        sign = 1
        for i in range(d):
            for j in range(i + 1, d):
                if perm[i] > perm[j]:
                    sign = -sign
        term = const(sign)
        for i in range(d):
            term = term * matrix[i][perm[i]]
        total = total + term
    return total


def test_determinant_examples():
    assert determinant([]) == one()
    assert determinant([[x(1)]]) == x(1)
    assert determinant([[one(), b(1)], [x(1), one()]]) == one() - x(1) * b(1)
    with pytest.raises(PolynomialError):
        determinant([[one(), one()]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_determinant_vs_leibniz(d, data):
    matrix = [[data.draw(polys(max_terms=2, max_exp=2, with_trunc=False))
               for _ in range(d)] for _ in range(d)]
    assert determinant(matrix) == _leibniz(matrix)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.data())
def test_determinant_vs_leibniz_truncated(d, trunc, data):
    matrix = [[data.draw(polys(max_terms=2, max_exp=2,
                               with_trunc=False)).truncated(trunc)
               for _ in range(d)] for _ in range(d)]
    assert determinant(matrix) == _leibniz(matrix)


# -- u-series -----------------------------------------------------------------

def test_useries_coeff_window():
    s = USeries.exact({0: one(), 1: b(1)})
    assert useries_coeff(s, 0) == one()
    assert useries_coeff(s, 1) == b(1)
    with pytest.raises(WindowError):
        s.coeff(2)
    # fully exact series may be read below their support: those are zeros
    assert s.coeff(-3) == zero()


def test_useries_unknown_tail_errors():
    s = USeries({0: one(), -1: -beta()}, lo=-1, hi=0, exact_below=False)
    assert s.coeff(-1) == -beta()
    with pytest.raises(WindowError):
        s.coeff(-2)


def test_useries_product_windows_add():
    a = USeries.exact({0: one(), 1: x(1)})
    bb = USeries.exact({0: one(), 1: b(1)})
    p = useries_mul(a, bb)
    assert p.coeff(2) == x(1) * b(1)
    assert p.coeff(1) == x(1) + b(1)


def test_useries_product_with_unknown_tail():
    tail = USeries({0: one(), -1: -beta(), -2: beta() ** 2},
                   lo=-2, hi=0, exact_below=False)
    lin = USeries.exact({0: one(), 1: b(1)})
    p = tail * lin
    # exact only where the unknown part of the tail cannot contribute
    assert p.lo == -1
    assert p.coeff(0) == one() - beta() * b(1)
    with pytest.raises(WindowError):
        p.coeff(-2)


def test_useries_reciprocal():
    trunc = 4
    s = USeries.exact({0: const(1, trunc) + beta() * x(1).truncated(trunc)})
    r = useries_reciprocal(s, 2, trunc)
    prod = s * r
    assert prod.coeff(0) == const(1, trunc)
    geom = const(1, trunc) - beta() * x(1) + beta() ** 2 * x(1) ** 2 \
        - beta() ** 3 * x(1) ** 3 + beta() ** 4 * x(1) ** 4
    assert r.coeff(0) == geom


# -- text and JSON ------------------------------------------------------------

def test_text_format():
    p = x(1) + b(1) + beta() * x(1) * b(1)
    assert str(p) == "x1 + b1 + B*x1*b1"
    assert str(one() - x(1) * b(1)) == "1 - x1*b1"
    assert str(zero()) == "0"
    assert str(-beta()) == "-B"
    assert str(Fraction(3, 2) * x(1) ** 2) == "3/2*x1^2"


def test_json_round_trip_is_bit_exact():
    p = x(1) + b(2) + beta() * x(1) * b(2) - Fraction(5, 3) * x(1) ** 3
    blob = json.dumps(poly_to_json(p))
    again = json.dumps(poly_to_json(poly_from_json(blob)))
    assert blob == again
    assert poly_from_json(blob) == p


def test_json_shape():
    doc = poly_to_json(x(1) + b(1) + beta() * x(1) * b(1))
    assert doc["vars"] == ["x1", "b1", "B"]
    assert doc["terms"][0] == {"c": "1", "e": [1, 0, 0]}
    assert doc["terms"][-1] == {"c": "1", "e": [1, 1, 1]}
    assert poly_to_json(zero()) == {"vars": [], "terms": []}


def test_json_rejects_malformed():
    with pytest.raises(PolynomialError):
        poly_from_json({"vars": ["b1", "x1"], "terms": []})
    with pytest.raises(PolynomialError):
        poly_from_json({"vars": ["x1"], "terms": [{"c": "1", "e": [1, 0]}]})
    with pytest.raises(PolynomialError):
        poly_from_json({"vars": ["q3"], "terms": []})


def test_equality_across_spaces():
    p = x(1) + zero() * b(5)
    q = x(1)
    assert p == q
    assert not (p == x(2))
