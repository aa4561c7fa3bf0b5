from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from openchain import scalars
from openchain.scalars import EXACT, FLOAT, Jet

from conftest import rationals


def test_exact_conversions():
    assert scalars.exact("-3/7") == Fraction(-3, 7)
    assert scalars.exact(np.int64(4)) == 4
    with pytest.raises(TypeError):
        scalars.exact(0.1)


def test_mode_inference():
    assert scalars.mode_of(Fraction(1, 2), 3) == EXACT
    assert scalars.mode_of(Fraction(1, 2), 0.5) == FLOAT
    assert scalars.mode_of(np.zeros(2)) == FLOAT
    assert scalars.mode_of(Jet(1.0, 0)) == FLOAT


@given(rationals(), rationals(), rationals())
def test_jet_field_rules(a, b, c):
    f = Jet(a, b)
    g = Jet(c, a)
    assert (f * g).deriv == b * c + a * a
    assert (f + g) - g == f
    if c != 0:
        assert ((f / g) * g) == f


@given(st.lists(rationals(), min_size=1, max_size=6), rationals())
def test_jet_horner_matches_expanded_derivative(coeffs, x0):
    acc = Jet(Fraction(0))
    for c in reversed(coeffs):
        acc = acc * Jet.variable(x0) + c
    expected = sum(k * c * x0 ** (k - 1) for k, c in enumerate(coeffs) if k)
    assert acc.value == sum(c * x0**k for k, c in enumerate(coeffs))
    assert acc.deriv == expected


def test_jet_power():
    j = Jet.variable(Fraction(2)) ** 3
    assert (j.value, j.deriv) == (8, 12)


@given(rationals(-1000, 1000, 1000))
def test_exact_json_round_trip(v):
    text = scalars.to_json(v)
    assert isinstance(text, str) and "/" in text
    assert scalars.from_json(text) == v


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_float_json_round_trip(z):
    assert scalars.from_json(scalars.to_json(z)) == z


def test_json_format():
    assert scalars.to_json(Fraction(-3, 7)) == "-3/7"
    assert scalars.to_json(2) == "2/1"
    assert scalars.to_json(0.5) == {"re": 0.5, "im": 0.0}


def test_all_zero_tolerance():
    assert scalars.all_zero(np.array([1e-13, -1e-13]), 1e-12)
    assert not scalars.all_zero(np.array([1e-13]))
    assert scalars.all_zero(scalars.zeros(3, EXACT))


def test_jet_parts_split():
    arr = np.array([Jet(Fraction(1), Fraction(2)), Fraction(3)], dtype=object)
    vals, ders = scalars.jet_parts(arr)
    assert list(vals) == [1, 3] and list(ders) == [2, 0]
