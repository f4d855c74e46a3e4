from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twisted_residue.scalar import (GaussianRational, PI, Scalar, format_scalar, omega, parse_scalar,
                                    scalar_eval)
from twisted_residue.poly import FormalPoly


def test_canonical_strings_round_trip():
    for text in ["(-1/2)*pi + 2*pi^2", "(2/3*i)*pi^3", "-1/2*i", "32*pi^2", "(1/2*i)*pi^2", "0"]:
        assert format_scalar(parse_scalar(text)) == text


def test_parse_accepts_loose_forms():
    assert parse_scalar("-pi/2 + 2*pi**2") == parse_scalar("(-1/2)*pi + 2*pi^2")
    assert parse_scalar("2*i*pi^3/3") == parse_scalar("(2/3*i)*pi^3")
    assert parse_scalar("1/(2*i)") == parse_scalar("-1/2*i")


@pytest.mark.parametrize("bad", ["pi^-1", "x + 1", "1/pi", "import os", "2**i"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_gaussian_inverse():
    z = GaussianRational(3, -4)
    assert z * z.inverse() == GaussianRational(1)
    assert GaussianRational(0, 1) ** 2 == GaussianRational(-1)


def test_scalar_eval_uses_supplied_pi():
    s = parse_scalar("(-1/2)*pi + 2*pi^2")
    assert scalar_eval(s, math.pi) == pytest.approx(-math.pi / 2 + 2 * math.pi ** 2)
    with pytest.raises(ValueError):
        scalar_eval(s, 0.0)


def test_omega_values():
    assert omega(2) == 2 * PI
    assert omega(4) == 2 * PI * PI
    assert isinstance(omega(3), FormalPoly)
    with pytest.raises(ValueError):
        omega(5)


fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)
scalars = st.dictionaries(st.integers(0, 3), st.builds(GaussianRational, fractions, fractions), max_size=3).map(Scalar)


@given(scalars, scalars, scalars)
def test_scalar_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == Scalar()


@given(scalars)
def test_format_parse_inverse(a):
    assert parse_scalar(format_scalar(a)) == a
