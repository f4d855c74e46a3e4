from __future__ import annotations

import pytest

from twisted_residue.clifford import CliffordElem
from twisted_residue.poly import FormalPoly
from twisted_residue.scalar import I
from twisted_residue.symbols import (boundary_evaluate, compose_symbols, parametrix, parametrix_defect,
                                     specialize_identity, symbol_DJ)
from twisted_residue.xi import RatXi


def untwisted_q1(n):
    """i c(xi) / |xi|^2 restricted to |xi'| = 1, built directly."""
    terms = {}
    for h in range(1, n):
        terms[1 << (h - 1)] = RatXi((FormalPoly.gen(("XiT", h), n).scale(I),), 1, 1, n)
    terms[1 << (n - 1)] = RatXi((FormalPoly({}, n), FormalPoly.const(I, n)), 1, 1, n)
    return CliffordElem(n, terms)


@pytest.mark.parametrize("n", [3, 4])
def test_q1_reduces_to_untwisted_symbol(n):
    q1, _ = parametrix(n)
    restricted = boundary_evaluate(q1)
    ident = restricted.map_coeffs(lambda r: r.map_coeffs(lambda c: specialize_identity(c, n)))
    assert ident == untwisted_q1(n)


def test_principal_symbol_is_first_order_in_xi():
    p1, p0 = symbol_DJ(4)
    assert p1.order == 1 and p0.order == 0
    assert set(p1.value.parts) == {0}


@pytest.mark.parametrize("n", [3, 4])
def test_parametrix_defect_vanishes(n):
    r = parametrix_defect(n)
    assert r.order0_is_identity and r.order_minus1_factorizes and r.order_minus1_vanishes


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        symbol_DJ(5)


def test_composition_truncation_guard():
    q1, q2 = parametrix(3)
    with pytest.raises(ValueError):
        compose_symbols([q1], [q1, q2], [-2])
