from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from twisted_residue import CliffordElem, RatXi
from twisted_residue.scalar import GaussianRational

small_int = st.integers(min_value=-5, max_value=5)


@st.composite
def gaussian(draw):
    return GaussianRational(Fraction(draw(small_int), draw(st.integers(1, 4))), draw(small_int))


@st.composite
def clifford(draw, n=4):
    terms = draw(st.dictionaries(st.integers(0, 2 ** n - 1), gaussian(), max_size=5))
    return CliffordElem(n, terms)


@st.composite
def decaying_ratxi(draw):
    """Random p(xi)/((xi-i)^a (xi+i)^b) with deg p < a + b."""
    a = draw(st.integers(0, 3))
    b = draw(st.integers(0, 3))
    if a + b == 0:
        b = 1
    deg = draw(st.integers(0, a + b - 1))
    coeffs = draw(st.lists(gaussian(), min_size=deg + 1, max_size=deg + 1))
    return RatXi.from_scalars(coeffs, a, b)


@st.composite
def integrable_ratxi(draw):
    """deg p <= a + b - 2, so the real-line integral converges absolutely."""
    a = draw(st.integers(1, 3))
    b = draw(st.integers(1, 3))
    deg = draw(st.integers(0, a + b - 2))
    coeffs = draw(st.lists(gaussian(), min_size=deg + 1, max_size=deg + 1))
    return RatXi.from_scalars(coeffs, a, b)
