"""Algebraic invariants checked on random inputs."""
from __future__ import annotations

from hypothesis import given, settings

from twisted_residue.clifford import CliffordElem, cl_mul, cl_trace
from twisted_residue.oracle import check_pi_plus
from twisted_residue.scalar import GaussianRational
from twisted_residue.xi import dxi_n, integrate_line, pi_minus, pi_plus

from strategies import clifford, decaying_ratxi, integrable_ratxi


@settings(max_examples=200, deadline=None)
@given(clifford(), clifford(), clifford())
def test_cl_mul_associative(a, b, c):
    assert cl_mul(cl_mul(a, b), c) == cl_mul(a, cl_mul(b, c))


@settings(max_examples=200, deadline=None)
@given(clifford(n=4), clifford(n=4))
def test_vectors_anticommute_to_inner_product(a, b):
    # project onto grade-1 parts, then u v + v u = -2 <u, v>
    u = CliffordElem(4, {m: c for m, c in a.terms.items() if bin(m).count("1") == 1})
    v = CliffordElem(4, {m: c for m, c in b.terms.items() if bin(m).count("1") == 1})
    inner = sum((u.terms[m] * v.terms[m] for m in u.terms if m in v.terms), GaussianRational(0))
    assert cl_mul(u, v) + cl_mul(v, u) == CliffordElem.scalar(4, inner * -2)


@settings(max_examples=200, deadline=None)
@given(clifford(), clifford(), clifford())
def test_trace_cyclic(a, b, c):
    abc = cl_trace(cl_mul(cl_mul(a, b), c))
    assert abc == cl_trace(cl_mul(cl_mul(b, c), a))
    assert cl_trace(cl_mul(a, b)) == cl_trace(cl_mul(b, a))


@settings(max_examples=200, deadline=None)
@given(decaying_ratxi())
def test_pi_plus_projection(p):
    plus = pi_plus(p)
    minus = pi_minus(p)
    assert pi_plus(plus) == plus
    assert pi_plus(minus).is_zero()
    assert plus + minus == p
    assert plus.b == 0 and minus.a == 0


@settings(max_examples=20, deadline=None)
@given(decaying_ratxi())
def test_pi_plus_matches_cauchy_integral(p):
    assert check_pi_plus(p) < 1e-8


@settings(max_examples=100, deadline=None)
@given(decaying_ratxi())
def test_integral_of_derivative_vanishes(p):
    assert integrate_line(dxi_n(p)).is_zero()


@settings(max_examples=50, deadline=None)
@given(integrable_ratxi(), integrable_ratxi())
def test_integral_linear(p, q):
    assert integrate_line(p + q) == integrate_line(p) + integrate_line(q)
