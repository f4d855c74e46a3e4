from __future__ import annotations

from twisted_residue.clifford import CliffordElem, abstract_trace, blade_of, cl_linear, cl_mul, cl_trace, \
    cl_trace_product, tr_id
from twisted_residue.poly import GPair, poly_sum
from twisted_residue.scalar import GaussianRational


def e(h, n=4):
    return CliffordElem.basis(n, h, GaussianRational(1))


def test_tr_id():
    assert [tr_id(n) for n in (2, 3, 4, 5)] == [2, 2, 4, 4]


def test_generators_square_to_minus_one_and_anticommute():
    for i in range(1, 5):
        assert cl_mul(e(i), e(i)) == CliffordElem.scalar(4, GaussianRational(-1))
        for j in range(i + 1, 5):
            assert cl_mul(e(i), e(j)) == -cl_mul(e(j), e(i))


def test_normal_ordering_sign():
    assert blade_of([2, 1]) == (-1, 0b11)
    assert blade_of([1, 2, 1]) == (1, 0b10)


def test_known_traces():
    e12 = cl_mul(e(1), e(2))
    assert cl_trace(cl_mul(e12, e12)) == GaussianRational(-4)
    assert cl_trace(e12) == 0
    assert cl_trace_product(e12, e12) == cl_trace(cl_mul(e12, e12))


def test_linear_vector_trace_is_minus_inner_product():
    g = GaussianRational
    u = cl_linear([(1, g(2)), (3, g(-1))], 4)
    v = cl_linear([(1, g(5)), (3, g(7)), (4, g(1))], 4)
    assert cl_trace(cl_mul(u, v)) == g(-(2 * 5 - 7) * 4)


def test_abstract_trace_pairs_and_quadruples():
    n = 4
    assert abstract_trace(["x", "y"], n) == GPair("x", "y", n).scale(-4)
    four = abstract_trace(["x", "y", "z", "w"], n)
    expected = poly_sum([GPair("x", "w", n) * GPair("y", "z", n), -(GPair("x", "z", n) * GPair("y", "w", n)),
                         GPair("x", "y", n) * GPair("z", "w", n)], n).scale(4)
    assert four == expected
    assert abstract_trace(["x", "y", "z"], n).is_zero()
