from __future__ import annotations

import numpy as np
import pytest

from twisted_residue.oracle import (check_J_instance, check_gamma, check_pair_trace, contour_derivative,
                                    evaluate_exact, make_gamma, numeric_case_integral, quad_line, quad_sphere,
                                    sample_J)
from twisted_residue.pipelines import phi_3d


@pytest.mark.parametrize("n", [3, 4])
def test_gamma_relations(n):
    assert check_gamma(n) < 1e-14
    g = make_gamma(n)
    assert g.dim == (2 if n == 3 else 4)


@pytest.mark.parametrize("seed", [0, 7, 12345])
def test_sampled_J_satisfies_constraints(seed):
    res = check_J_instance(sample_J(seed, 4))
    assert max(res["involution"], res["symmetry"], res["anticommute"], res["dJ-symmetric"]) < 1e-10
    assert max(res["finite-difference"], res["derivative-relation"]) < 1e-6


def test_sampling_is_deterministic():
    a, b = sample_J(3, 4), sample_J(3, 4)
    assert np.array_equal(a.J0, b.J0) and np.array_equal(a.dJ, b.dJ)


def test_quadrature_primitives():
    assert abs(quad_line(lambda x: 1 / (1 + x * x)).value - np.pi) < 1e-10
    res = quad_sphere(lambda p: p[:, 0] ** 2, 3)
    assert abs(res.value - 4 * np.pi / 3) < 1e-10
    d = contour_derivative(lambda z: np.exp(2 * z), 0.3 + 0j, 2)
    assert abs(d - 4 * np.exp(0.6)) < 1e-8


def test_pair_trace_numeric():
    assert check_pair_trace(5, 4) < 1e-10


def test_three_dimensional_case_matches_numeric():
    inst = sample_J(11, 3)
    exact = evaluate_exact(phi_3d("geometric").poly, inst)
    num = numeric_case_integral(inst, "phi")
    assert abs(exact - num) <= 1e-6 * max(1.0, abs(exact))
