"""End-to-end acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
from __future__ import annotations

import time
from typing import List

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import CRITERIA
from strategies import clifford, decaying_ratxi
from test_symbols import untwisted_q1
from twisted_residue.cli import Session, oracle_checks, run_entry, untwisted_check
from twisted_residue.clifford import cl_mul, cl_trace
from twisted_residue.expected import canonical_form, classes_poly, entries_by_id, load_expected
from twisted_residue.oracle import quad_sphere
from twisted_residue.pipelines import phi_3d, boundary_assembly_3d
from twisted_residue.poly import FormalPoly, poly_sum, substitute_J_relations
from twisted_residue.scalar import format_scalar, parse_scalar, scalar_eval
from twisted_residue.symbols import boundary_evaluate, parametrix, specialize_identity
from twisted_residue.xi import RatXi, dxi_n, integrate_line, pi_minus, pi_plus, sphere_moment


@pytest.fixture(scope="module")
def fresh():
    """Uncached pipeline state, so per-criterion timings include the real work."""
    return Session(load_expected(), 4)


def record(k: int, ok: bool, line: str) -> None:
    CRITERIA[k] = (ok, line)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} {line}")
    assert ok, line


def statuses(session: Session, ids: List[str]):
    return {cid: run_entry(session.entries[cid], session) for cid in ids}


def test_criterion_01_pi_plus_unit_vectors(fresh):
    t0 = time.perf_counter()
    rep = statuses(fresh, ["pi-plus-1", "pi-plus-2", "pi-plus-3"])
    # independent literal forms: 1/(2i(xi-i)), -(i xi + 2)/(4(xi-i)^2), -i/(4(xi-i)^2)
    lit = [RatXi.from_scalars([parse_scalar("1/(2*i)")], 1, 0),
           RatXi.from_scalars([parse_scalar("-1/2"), parse_scalar("-i/4")], 2, 0),
           RatXi.from_scalars([parse_scalar("-i/4")], 2, 0)]
    inputs = [RatXi.from_scalars([1], 1, 1), RatXi.from_scalars([1], 2, 2), RatXi.from_scalars([0, 1], 2, 2)]
    literal_ok = all(pi_plus(p).structurally_equal(q) for p, q in zip(inputs, lit))
    elapsed = time.perf_counter() - t0
    ok = literal_ok and all(r.status == "match" for r in rep.values()) and elapsed < 1.0
    record(1, ok, f"pi+ unit vectors exact, {elapsed:.2f}s (< 1s)")


def test_criterion_02_case_one(fresh):
    t0 = time.perf_counter()
    r = statuses(fresh, ["psi1"])["psi1"]
    elapsed = time.perf_counter() - t0
    coeffs = [format_scalar(parse_scalar(c["coefficient"])) for c in fresh.entries["psi1"]["classes"]]
    ok = r.status == "match" and coeffs == ["(-1/8)*pi + (1/3)*pi^2", "(-1/6)*pi^2"] and elapsed < 10
    record(2, ok, f"psi1 = Omega_3 tr[id] x {coeffs}: {r.status}, {elapsed:.1f}s (< 10s)")


def test_criterion_03_cases_two_and_three(fresh):
    t0 = time.perf_counter()
    rep = statuses(fresh, ["psi2", "psi3", "psi2+psi3"])
    elapsed = time.perf_counter() - t0
    sizes = [len(fresh.entries[c]["classes"]) for c in ("psi2", "psi3")]
    ok = all(r.status == "match" for r in rep.values()) and sizes == [6, 6] and elapsed < 30
    record(3, ok, f"psi2, psi3 six coefficients each, psi2+psi3 = 0: "
                  f"{[r.status for r in rep.values()]}, {elapsed:.1f}s (< 30s)")


def test_criterion_04_cases_four_and_five(fresh):
    t0 = time.perf_counter()
    rep = statuses(fresh, ["psi4", "psi5", "psi4+psi5", "psi-total"])
    elapsed = time.perf_counter() - t0
    got = {k: r.status for k, r in rep.items()}
    on_shell = [rep[k].detail.get("residual_on_constraint_surface") for k in ("psi4", "psi5")]
    ok = all(s == "match" for s in got.values()) and elapsed < 120
    record(4, ok, f"{got}; case residuals on the J constraint surface {on_shell}, {elapsed:.1f}s (< 120s)")


def test_criterion_05_boundary_theorem(fresh):
    r = statuses(fresh, ["theorem-boundary-4d", "lemma38"])
    coeff = r["theorem-boundary-4d"].computed
    ok = all(x.status == "match" for x in r.values()) and coeff == "(-1/2)*pi + 2*pi^2"
    record(5, ok, f"boundary coefficient {coeff} x Omega_3 on the single structure")


def test_criterion_06_three_dimensions():
    t0 = time.perf_counter()
    table = load_expected()
    entry = entries_by_id(table)["phi"]
    phi = phi_3d()
    want = canonical_form(classes_poly(entry["classes"], 3)).scale(2) * FormalPoly.gen(("Omega", 2))
    phi_ok = (canonical_form(phi.poly) - want).is_zero()
    c_t, c_n, residual = boundary_assembly_3d(phi)
    got = [format_scalar(c_t), format_scalar(c_n)]
    elapsed = time.perf_counter() - t0
    ok = phi_ok and residual.is_zero() and got == ["(2/3*i)*pi^3", "(1/2*i)*pi^2"] and elapsed < 10
    record(6, ok, f"phi classes match: {phi_ok}; assembled {got} vs ['(2/3*i)*pi^3', '(1/2*i)*pi^2'], "
                  f"{elapsed:.1f}s (< 10s)")


def test_criterion_07_interior(fresh):
    ids = ["interior-curvature", "interior-first-derivative", "interior-second-derivative", "interior-quartic",
           "interior-integrand", "interior-prefactor"]
    rep = statuses(fresh, ids)
    coeffs = list(rep["interior-integrand"].computed.values())
    ok = all(r.status == "match" for r in rep.values()) and coeffs == ["1/4", "-1/2", "-1/2", "-1/4", "-1/4",
                                                                        "1/4", "-1/12"]
    record(7, ok, f"four trace identities, integrand {coeffs}, prefactor {rep['interior-prefactor'].computed}")


def test_criterion_08_property_suite():
    failures = []

    @settings(max_examples=200, deadline=None)
    @given(clifford(), clifford(), clifford())
    def associativity(a, b, c):
        assert cl_mul(cl_mul(a, b), c) == cl_mul(a, cl_mul(b, c))

    @settings(max_examples=200, deadline=None)
    @given(clifford(), clifford())
    def anticommutation(a, b):
        u = a.__class__(4, {m: c for m, c in a.terms.items() if bin(m).count("1") == 1})
        v = b.__class__(4, {m: c for m, c in b.terms.items() if bin(m).count("1") == 1})
        sym = cl_mul(u, v) + cl_mul(v, u)
        assert set(sym.terms) <= {0}

    @settings(max_examples=200, deadline=None)
    @given(clifford(), clifford(), clifford())
    def cyclicity(a, b, c):
        assert cl_trace(cl_mul(cl_mul(a, b), c)) == cl_trace(cl_mul(cl_mul(c, a), b))

    @settings(max_examples=200, deadline=None)
    @given(decaying_ratxi())
    def projection(p):
        plus = pi_plus(p)
        assert pi_plus(plus) == plus
        assert plus + pi_minus(p) == p and pi_plus(pi_minus(p)).is_zero()

    @settings(max_examples=100, deadline=None)
    @given(decaying_ratxi())
    def exact_derivative(p):
        assert integrate_line(dxi_n(p)).is_zero()

    def relation_idempotence():
        q1, _ = parametrix(4)
        for elem in boundary_evaluate(q1).terms.values():
            for c in elem.num:
                once = substitute_J_relations(c * c, 4)
                assert substitute_J_relations(once, 4) == once

    for prop in (associativity, anticommutation, cyclicity, projection, exact_derivative, relation_idempotence):
        try:
            prop()
        except Exception as exc:  # collected so every property is reported
            failures.append(f"{prop.__name__}: {exc!r}")
    record(8, not failures, "property suite" + (f" failures: {failures}" if failures else " green"))


def test_criterion_09_oracle_agreement(fresh):
    t0 = time.perf_counter()
    reports = oracle_checks(4, "all", list(range(20)), fresh)
    sphere_err = 0.0
    for exps in ([2, 0, 0], [0, 4, 0], [2, 2, 2], [0, 0, 0]):
        num = quad_sphere(lambda p, e=exps: np.prod(p ** np.array(e), axis=1), 3).value
        sphere_err = max(sphere_err, abs(num - _moment_value(exps)))
    elapsed = time.perf_counter() - t0
    bad = [r.check_id for r in reports if r.status != "match"]
    psi = [r for r in reports if r.check_id.startswith("oracle-psi")]
    worst = max(r.computed for r in psi)
    ok = not bad and sphere_err < 1e-8 and len(psi) == 20 * 6 and elapsed < 300
    record(9, ok, f"{len(reports)} oracle checks over 20 seeds, failing {bad}; worst psi rel. error {worst:.1e}, "
                  f"sphere {sphere_err:.1e}, {elapsed:.0f}s (< 300s)")


def _moment_value(exps) -> float:
    return scalar_eval(sphere_moment(exps, 3), float(np.pi)).real


def test_criterion_10_untwisted_reduction(fresh):
    q1, _ = parametrix(4)
    restricted = boundary_evaluate(q1)
    ident = restricted.map_coeffs(lambda r: r.map_coeffs(lambda c: specialize_identity(c, 4)))
    q_ok = ident == untwisted_q1(4)
    exact = [specialize_identity(poly_sum((fresh.case(f"psi{k}", conv).poly for k in range(1, 6)), 4), 4)
             for conv in ("omega-normalized", "geometric")]
    numeric = untwisted_check(fresh)
    ok = q_ok and all(p.is_zero() for p in exact) and numeric.status == "match"
    record(10, ok, f"q_-1 -> i c(xi)/|xi|^2: {q_ok}; exact total at J = id vanishes: "
                   f"{[p.is_zero() for p in exact]}; numeric |total| {numeric.computed}")
