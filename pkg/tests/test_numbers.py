from fractions import Fraction

import pytest
from hypothesis import given

from rdiffsys import GaussianRational as G
from rdiffsys.numbers import I, ONE, ZERO, as_gaussian

from conftest import gaussians, nonzero_gaussians


def test_lowest_terms_and_positive_denominator():
    x = G(Fraction(2, -4), Fraction(6, 8))
    assert x.re == Fraction(-1, 2)
    assert x.im == Fraction(3, 4)


def test_rendering():
    assert str(G(Fraction(1, 2), -3)) == "1/2-3*i"
    assert str(-I) == "-i"
    assert str(G(0, 2)) == "2*i"
    assert str(ZERO) == "0"


@pytest.mark.parametrize("text", ["1/2-3*i", "-i", "2*i", "7", "-5/3+1/4*i", "0"])
def test_parse_round_trip(text):
    assert str(G.parse(text)) == text


def test_i_squared():
    assert I * I == -ONE


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_gaussian(0.5)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(nonzero_gaussians, gaussians)
def test_division_inverts_multiplication(a, b):
    assert (b * a) / a == b
    assert a * a.inverse() == ONE
    assert a.norm() == (a * a.conjugate()).re
