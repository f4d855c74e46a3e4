from __future__ import annotations

import pytest

from twisted_residue.scalar import PI, parse_scalar
from twisted_residue.poly import FormalPoly
from twisted_residue.xi import RatXi, dxi_n, integrate_line, pi_minus, pi_plus, pi_prime, sphere_integrate, \
    sphere_moment


def rat(coeffs, a, b):
    return RatXi.from_scalars([parse_scalar(c) for c in coeffs], a, b)


def test_pole_cancellation_on_construction():
    p = rat(["-i", "1"], 2, 1)  # (xi - i) / ((xi-i)^2 (xi+i))
    assert (p.a, p.b) == (1, 1)


def test_line_integrals():
    assert integrate_line(rat(["1"], 1, 1)) == FormalPoly.const(PI)
    assert integrate_line(rat(["1"], 2, 2)) == FormalPoly.const(PI.__mul__(parse_scalar("1/2")))
    assert integrate_line(rat(["0", "0", "1"], 2, 2)) == FormalPoly.const(parse_scalar("pi/2"))
    with pytest.raises(ValueError):
        integrate_line(rat(["0", "1"], 1, 1))


def test_pi_prime_of_lorentzian():
    assert pi_prime(rat(["1"], 1, 1)) == FormalPoly.const(parse_scalar("1/2"))


def test_pi_plus_domain():
    with pytest.raises(ValueError):
        pi_plus(rat(["0", "1"], 0, 1))


def test_pi_plus_of_lower_pole_only_is_zero():
    assert pi_plus(rat(["1"], 0, 2)).is_zero()
    assert pi_minus(rat(["1"], 0, 2)) == rat(["1"], 0, 2)


def test_derivative():
    # d/dxi 1/(1+xi^2) = -2 xi / (1+xi^2)^2
    assert dxi_n(rat(["1"], 1, 1)) == rat(["0", "-2"], 2, 2)


@pytest.mark.parametrize("exps,m,value", [
    ([0, 0], 2, "2*pi"), ([2, 0], 2, "pi"), ([2, 0, 0], 3, "4*pi/3"), ([4, 0, 0], 3, "4*pi/5"),
    ([2, 2, 0], 3, "4*pi/15"), ([1, 1, 0], 3, "0"), ([0, 0, 0], 3, "4*pi"),
])
def test_sphere_moments(exps, m, value):
    assert sphere_moment(exps, m) == parse_scalar(value)


def test_sphere_conventions():
    xi1sq = FormalPoly.gen(("XiT", 1), 4) ** 2
    geo = sphere_integrate(xi1sq + FormalPoly.const(1, 4), 4, "geometric")
    assert geo == FormalPoly.const(parse_scalar("4*pi/3 + 4*pi"), 4)
    norm = sphere_integrate(xi1sq + FormalPoly.const(1, 4), 4)
    assert norm == FormalPoly.const(parse_scalar("4*pi/3 + 1"), 4) * FormalPoly.gen(("Omega", 3), 4)
    with pytest.raises(ValueError):
        sphere_integrate(xi1sq, 4, "other")
