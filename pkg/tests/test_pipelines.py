from __future__ import annotations

from fractions import Fraction

import pytest

from twisted_residue.pipelines import (CaseSpec, boundary_structure, case_term, decompose, enumerate_cases,
                                       interior_prefactor, phi_3d, boundary_assembly_3d)
from twisted_residue.poly import FormalPoly, HP, poly_sum
from twisted_residue.scalar import parse_scalar
from twisted_residue.symbols import specialize_identity


def test_case_enumeration():
    names = [c.total() for c in enumerate_cases(4)]
    assert names == [-4] * 5
    assert [c.total() for c in enumerate_cases(3)] == [-3]
    with pytest.raises(ValueError):
        enumerate_cases(5)


def test_case_constraint_enforced():
    with pytest.raises(ValueError):
        case_term(CaseSpec(-1, -1, 0, 0, 0), 4)


def test_interior_prefactor():
    assert interior_prefactor(4) == parse_scalar("32*pi^2")


def test_decompose_exact():
    a = HP(4)
    b = HP(4) ** 2
    target = a.scale(parse_scalar("pi")) - b.scale(Fraction(1, 3))
    coeffs, residual, unique = decompose(target, {"a": a, "b": b})
    assert unique and residual.is_zero()
    assert coeffs == {"a": parse_scalar("pi"), "b": parse_scalar("-1/3")}
    _, residual, _ = decompose(target + FormalPoly.gen(("S",), 4), {"a": a, "b": b})
    assert not residual.is_zero()


def test_boundary_structure_terms():
    assert len(boundary_structure(4).terms) == 4 * 3


def test_untwisted_total_vanishes(session):
    total = poly_sum((session.case(f"psi{k}").poly for k in range(1, 6)), 4)
    assert specialize_identity(total, 4).is_zero()


def test_phi_assembly_leaves_no_residual():
    _, _, residual = boundary_assembly_3d(phi_3d())
    assert residual.is_zero()
    # unlike n = 4, the untwisted n = 3 boundary term does not vanish
    assert not specialize_identity(phi_3d("geometric").poly, 3).is_zero()
