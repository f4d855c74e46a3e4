"""Boundary and interior residue computations.

The boundary term is the sum over multi-indices (r, l, k, j, |alpha|) with
r + l - k - j - |alpha| - 1 = -n of

    (-i)^{|alpha|+j+k+1} / (alpha! (j+k+1)!) *
    int_{|xi'|=1} int_R tr[ d_xn^j d_xi'^alpha d_xin^k pi+ q_r
                           * d_x'^alpha d_xin^{j+1} d_xn^k q_l ] dxi_n

evaluated at the base point.  Everything is exact: traces are taken in the
Clifford algebra, the xi_n integral by residues and the xi' integral by
sphere moments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Tuple

from .clifford import CliffordElem, abstract_trace, cl_trace_product, tr_id
from .poly import FormalPoly, GPair, RCurv, poly_sum, substitute_J_relations, symmetrize_A
from .scalar import I, ONE, PI, Scalar, rational
from .symbols import GenSym, boundary_evaluate, parametrix
from .xi import RatXi, dxi_n, integrate_line, pi_plus, sphere_integrate


@dataclass(frozen=True)
class CaseSpec:
    r: int
    l: int
    k: int
    j: int
    alpha_norm: int

    def total(self) -> int:
        return self.r + self.l - self.k - self.j - self.alpha_norm - 1


CASE_NAMES = {
    CaseSpec(-1, -1, 0, 0, 1): "psi1",
    CaseSpec(-1, -1, 0, 1, 0): "psi2",
    CaseSpec(-1, -1, 1, 0, 0): "psi3",
    CaseSpec(-2, -1, 0, 0, 0): "psi4",
    CaseSpec(-1, -2, 0, 0, 0): "psi5",
}


def enumerate_cases(n: int) -> List[CaseSpec]:
    """All (r, l, k, j, |alpha|) with r, l in {-1, -2} and the homogeneity constraint."""
    if n not in (3, 4):
        raise ValueError("only n = 3 and n = 4 are configured")
    out = []
    for r in (-1, -2):
        for l in (-1, -2):
            rest = r + l - 1 + n  # = k + j + |alpha|
            if rest < 0:
                continue
            for k in range(rest + 1):
                for j in range(rest + 1 - k):
                    out.append(CaseSpec(r, l, k, j, rest - k - j))
    order = {"psi1": 0, "psi2": 1, "psi3": 2, "psi4": 3, "psi5": 4}
    return sorted(out, key=lambda c: (order.get(CASE_NAMES.get(c, ""), 9), -c.r, -c.l, c.k, c.j))


@dataclass
class BoundaryTermResult:
    case_id: str
    spec: Optional[CaseSpec]
    n: int
    convention: str
    poly: FormalPoly
    elapsed: float = 0.0
    meta: Dict[str, str] = field(default_factory=dict)

    def __add__(self, other: "BoundaryTermResult") -> "BoundaryTermResult":
        return BoundaryTermResult(f"{self.case_id}+{other.case_id}", None, self.n, self.convention,
                                  self.poly + other.poly, self.elapsed + other.elapsed)


@lru_cache(maxsize=None)
def _parametrix(n: int) -> Dict[int, GenSym]:
    q1, q2 = parametrix(n)
    return {-1: q1.value, -2: q2.value}


def _apply(sym: GenSym, xi_steps: Tuple[int, ...], x_steps: Tuple[int, ...]) -> GenSym:
    for j in x_steps:
        sym = sym.dx(j)
    for j in xi_steps:
        sym = sym.dxi(j)
    return sym


def _map(elem: CliffordElem, f) -> CliffordElem:
    return CliffordElem(elem.n, {m: f(c) for m, c in elem.terms.items()})


def _multi_indices(n: int, order: int):
    """Multi-indices over tangential directions 1..n-1 of total order, as sorted tuples."""
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, n):
            for rest in rec(i, left - 1):
                yield (i,) + rest
    yield from rec(1, order)


def _alpha_factorial(alpha: Tuple[int, ...]) -> int:
    out = 1
    for i in set(alpha):
        out *= factorial(alpha.count(i))
    return out


def case_integrand(spec: CaseSpec, n: int) -> RatXi:
    """Trace integrand (before the xi_n and sphere integrals), prefactor included."""
    q = _parametrix(n)
    if spec.r not in q or spec.l not in q:
        raise ValueError("truncation-too-shallow")
    total = RatXi((), 0, 0, n)
    for alpha in _multi_indices(n, spec.alpha_norm):
        left = _apply(q[spec.r], alpha, (n,) * spec.j)
        left_r = _map(boundary_evaluate(left), pi_plus)
        for _ in range(spec.k):
            left_r = _map(left_r, dxi_n)
        right = _apply(q[spec.l], (n,) * (spec.j + 1), alpha + (n,) * spec.k)
        right_r = boundary_evaluate(right)
        tr = cl_trace_product(left_r, right_r)
        if isinstance(tr, RatXi):
            total = total + tr * Scalar.coerce(Fraction(1, _alpha_factorial(alpha)))
    power = spec.alpha_norm + spec.j + spec.k + 1
    pref = (-I) ** power * Scalar.coerce(Fraction(1, factorial(spec.j + spec.k + 1)))
    return total * pref


def case_term(spec: CaseSpec, n: int = 4, convention: str = "omega-normalized") -> BoundaryTermResult:
    if spec.total() != -n:
        raise ValueError("case does not satisfy the homogeneity constraint")
    t0 = time.perf_counter()
    integrand = case_integrand(spec, n)
    line = integrate_line(integrand)
    poly = symmetrize_A(sphere_integrate(line, n, convention))
    return BoundaryTermResult(CASE_NAMES.get(spec, str(spec)) if n == 4 else "phi-case", spec, n,
                              convention, poly, time.perf_counter() - t0)


def psi_cases(convention: str = "omega-normalized") -> Dict[str, BoundaryTermResult]:
    return {CASE_NAMES[s]: case_term(s, 4, convention) for s in enumerate_cases(4)}


def psi_total(cases: Optional[Dict[str, BoundaryTermResult]] = None,
              convention: str = "omega-normalized") -> BoundaryTermResult:
    cases = cases or psi_cases(convention)
    poly = poly_sum((cases[k].poly for k in sorted(cases)), 4)
    return BoundaryTermResult("psi", None, 4, convention, poly,
                              sum(c.elapsed for c in cases.values()))


# ------------------------------------------------------------ boundary coefficient assembly (n = 4)

def boundary_structure(n: int = 4) -> FormalPoly:
    """sum_b sum_{i<n} a_b^i d_{x_i} a_b^n, written in canonical (symmetric) A order."""
    terms = []
    for b in range(1, n + 1):
        for i in range(1, n):
            terms.append(FormalPoly.gen(("A", min(b, i), max(b, i)), n)
                         * FormalPoly.gen(("DA", i, b, n), n))
    return poly_sum(terms, n)


@dataclass
class BoundaryAssembly:
    coefficient: Scalar
    structure: FormalPoly
    reduced: FormalPoly
    residual: FormalPoly


def boundary_assembly_4d(total: Optional[BoundaryTermResult] = None) -> BoundaryAssembly:
    """Apply the J relations to the total boundary term and read off c * Omega_3 * S."""
    total = total or psi_total()
    reduced = substitute_J_relations(total.poly, 4)
    structure = boundary_structure(4)
    om = FormalPoly.gen(("Omega", 3))
    # coefficient of the first monomial of S * Omega_3 determines c; the rest must agree
    probe = next(iter(sorted((structure * om).terms, key=repr)))
    coefficient = reduced.terms.get(probe, Scalar())
    residual = reduced - (structure * om).scale(coefficient)
    return BoundaryAssembly(coefficient, structure, reduced, residual)


# ------------------------------------------------------------ n = 3

def phi_3d(convention: str = "omega-normalized") -> BoundaryTermResult:
    """tr[pi+ q_{-1} * d_{xi_n} q_{-1}] integrated, with unit prefactor.

    The general boundary sum weights this multi-index by (-i); the
    three-dimensional statement is written without that factor, so phi_3d
    equals i times ``case_term`` of the single n = 3 case.
    """
    spec = enumerate_cases(3)[0]
    t0 = time.perf_counter()
    integrand = case_integrand(spec, 3) * I  # undo the (-i) prefactor
    poly = symmetrize_A(sphere_integrate(integrate_line(integrand), 3, convention))
    return BoundaryTermResult("phi", spec, 3, convention, poly, time.perf_counter() - t0)


def phi_structures(n: int = 3) -> Tuple[FormalPoly, FormalPoly]:
    """(sum_b sum_{i<n} (a_b^i)^2, sum_b (a_b^n)^2) in free-symbol form."""
    tang = poly_sum((FormalPoly.gen(("A", b, i), n) ** 2 for b in range(1, n + 1) for i in range(1, n)), n)
    norm = poly_sum((FormalPoly.gen(("A", b, n), n) ** 2 for b in range(1, n + 1)), n)
    return symmetrize_A(tang), symmetrize_A(norm)


def boundary_assembly_3d(phi: Optional[BoundaryTermResult] = None) -> Tuple[Scalar, Scalar, FormalPoly]:
    """Coefficients on the two structures with Omega_2 = 2 pi, and the leftover (should be 0)."""
    phi = phi or phi_3d()
    expanded = phi.poly.substitute({("Omega", 2): FormalPoly.const(2 * PI, 3)})
    tang, norm = phi_structures(3)
    # A(1,1)^2 only occurs in the tangential structure, A(n,n)^2 only in the normal one
    c_t = expanded.terms.get(((("A", 1, 1), 2),), Scalar())
    c_n = expanded.terms.get(((("A", 3, 3), 2),), Scalar())
    residual = expanded - tang.scale(c_t) - norm.scale(c_n)
    return c_t, c_n, residual


# ------------------------------------------------------------ interior part

def e(i):
    return ("e", i)


def Je(i):
    return ("Je", i)


def dJ(a, b):
    """(nabla_{e_a} J) e_b."""
    return ("dJ", a, b)


def ddJ(nu):
    """sum_j (nabla_{e_j} nabla_{e_nu} J) e_j - (nabla_{nabla_{e_j} e_nu} J) e_j."""
    return ("ddJ", nu)


def frame_contract(p: FormalPoly) -> FormalPoly:
    """Orthonormal frame and isometry: g(e_a, e_b) = g(J e_a, J e_b) = delta_ab."""
    table = {}
    for g in p.generators():
        if g[0] != "GPair":
            continue
        u, v = g[1], g[2]
        if u[0] == v[0] and u[0] in ("e", "Je"):
            table[g] = FormalPoly.const(1 if u[1] == v[1] else 0)
    return p.substitute(table) if table else p


def _R(u, v, w, z) -> FormalPoly:
    return RCurv(u, v, w, z)


def _g(u, v) -> FormalPoly:
    return GPair(u, v)


def interior_trace_identities(n: int = 4) -> List[Tuple[str, FormalPoly, FormalPoly]]:
    """Left and right sides of the four interior trace identities, both times tr[id]."""
    rng = range(1, n + 1)
    t = tr_id(n)
    out = []

    lhs = poly_sum(_R(Je(i), Je(j), e(k), e(l)) * frame_contract(abstract_trace([e(i), e(j), e(k), e(l)], n))
                   for i in rng for j in rng for k in rng for l in rng)
    rhs = poly_sum(_R(Je(i), Je(j), e(j), e(i)) for i in rng for j in rng).scale(2 * t)
    out.append(("curvature", lhs, rhs))

    lhs = poly_sum(abstract_trace([dJ(j, nu), dJ(nu, j)], n) for nu in rng for j in rng)
    rhs = poly_sum(_g(dJ(j, nu), dJ(nu, j)) for nu in rng for j in rng).scale(-t)
    out.append(("first-derivative", lhs, rhs))

    lhs = poly_sum(abstract_trace([Je(nu), ddJ(nu)], n) for nu in rng)
    rhs = poly_sum(_g(Je(nu), ddJ(nu)) for nu in rng).scale(-t)
    out.append(("second-derivative", lhs, rhs))

    lhs = poly_sum(frame_contract(abstract_trace([Je(a), dJ(a, j), Je(nu), dJ(nu, j)], n))
                   for a in rng for nu in rng for j in rng)
    rhs = poly_sum(
        _g(Je(a), dJ(nu, j)) * _g(dJ(a, j), Je(nu))
        for a in rng for nu in rng for j in rng).scale(t)
    rhs = rhs - poly_sum(_g(dJ(nu, j), dJ(nu, j)) for nu in rng for j in rng).scale(t)
    rhs = rhs + poly_sum(
        _g(Je(a), dJ(a, j)) * _g(Je(nu), dJ(nu, j))
        for a in rng for nu in rng for j in rng).scale(t)
    out.append(("quartic", lhs, rhs))
    return out


def interior_classes(n: int = 4) -> Dict[str, FormalPoly]:
    """The seven structures of the interior integrand, in a fixed order."""
    rng = range(1, n + 1)
    return {
        "R(Je_i,Je_j,e_j,e_i)": poly_sum(_R(Je(i), Je(j), e(j), e(i)) for i in rng for j in rng),
        "g(dJ(j,nu),dJ(nu,j))": poly_sum(_g(dJ(j, nu), dJ(nu, j)) for nu in rng for j in rng),
        "g(Je_nu,ddJ(nu))": poly_sum(_g(Je(nu), ddJ(nu)) for nu in rng),
        "g(Je_a,dJ(nu,j))g(dJ(a,j),Je_nu)": poly_sum(
            _g(Je(a), dJ(nu, j)) * _g(dJ(a, j), Je(nu)) for a in rng for nu in rng for j in rng),
        "g(Je_a,dJ(a,j))g(Je_nu,dJ(nu,j))": poly_sum(
            _g(Je(a), dJ(a, j)) * _g(Je(nu), dJ(nu, j)) for a in rng for nu in rng for j in rng),
        "g(dJ(nu,j),dJ(nu,j))": poly_sum(_g(dJ(nu, j), dJ(nu, j)) for nu in rng for j in rng),
        "s": FormalPoly.gen(("S",)),
    }


def endomorphism_trace(n: int = 4) -> FormalPoly:
    """tr(s/6 + E) at x0, with E the built-in endomorphism term of the squared operator.

    E = 1/8 sum R(Je_i,Je_j,e_k,e_l) c(e_i)c(e_j)c(e_k)c(e_l)
        + 1/2 sum c(dJ(j,nu)) c(dJ(nu,j)) + 1/2 sum c(Je_nu) c(ddJ(nu))
        - 1/4 sum c(Je_a) c(dJ(a,j)) c(Je_nu) c(dJ(nu,j)) - s/4
    """
    rng = range(1, n + 1)
    t = tr_id(n)
    curv = poly_sum(_R(Je(i), Je(j), e(k), e(l)) * frame_contract(abstract_trace([e(i), e(j), e(k), e(l)], n))
                    for i in rng for j in rng for k in rng for l in rng)
    first = poly_sum(abstract_trace([dJ(j, nu), dJ(nu, j)], n) for nu in rng for j in rng)
    second = poly_sum(abstract_trace([Je(nu), ddJ(nu)], n) for nu in rng)
    quartic = poly_sum(frame_contract(abstract_trace([Je(a), dJ(a, j), Je(nu), dJ(nu, j)], n))
                       for a in rng for nu in rng for j in rng)
    s = FormalPoly.gen(("S",))
    return (curv.scale(rational(1, 8)) + first.scale(rational(1, 2)) + second.scale(rational(1, 2))
            - quartic.scale(rational(1, 4)) + s.scale(t * rational(1, 6)) - s.scale(t * rational(1, 4)))


@dataclass
class InteriorAssembly:
    prefactor: Scalar           # (n-2)(4 pi)^{n/2} / (n/2 - 1)!
    spinor_factor: int          # 2^{n/2} = tr[id]
    coefficients: Dict[str, Scalar]
    residual: FormalPoly


def interior_prefactor(n: int) -> Scalar:
    if n % 2:
        raise ValueError("the interior prefactor is a pi-polynomial only for even n")
    return Scalar.coerce(n - 2) * (4 * PI) ** (n // 2) * Scalar.coerce(Fraction(1, factorial(n // 2 - 1)))


def decompose(target: FormalPoly, basis: Dict[str, FormalPoly]) -> Tuple[Dict[str, Scalar], FormalPoly, bool]:
    """Write target as sum c_k basis_k exactly.

    Basis coefficients must be rational constants (pivots are divided by);
    the target may carry any Scalar coefficients.  Returns (coefficients,
    residual, unique) where ``unique`` says the basis is linearly independent.
    """
    names = list(basis)
    monos = sorted({m for b in basis.values() for m in b.terms} | set(target.terms), key=repr)
    rows = []
    for m in monos:
        row = [Fraction(basis[k].terms[m].constant().re) if m in basis[k].terms else Fraction(0) for k in names]
        rows.append((row, target.terms.get(m, Scalar())))
    pivots: List[Tuple[int, List[Fraction], Scalar]] = []
    for row, rhs in rows:
        row = list(row)
        for col, prow, prhs in pivots:
            f = row[col]
            if f:
                row = [x - f * y for x, y in zip(row, prow)]
                rhs = rhs - prhs * Scalar.coerce(f)
        col = next((c for c, x in enumerate(row) if x), None)
        if col is None:
            continue
        f = row[col]
        row = [x / f for x in row]
        rhs = rhs * Scalar.coerce(1 / f)
        new = []
        for c2, prow, prhs in pivots:
            g = prow[col]
            if g:
                prow = [x - g * y for x, y in zip(prow, row)]
                prhs = prhs - rhs * Scalar.coerce(g)
            new.append((c2, prow, prhs))
        pivots = new + [(col, row, rhs)]
    coeffs = {k: Scalar() for k in names}
    for col, prow, prhs in pivots:
        coeffs[names[col]] = prhs
    residual = target - poly_sum((basis[k].scale(c) for k, c in coeffs.items()), target.n)
    return coeffs, residual, len(pivots) == len(names)


def interior_assembly(n: int = 4) -> InteriorAssembly:
    """Decompose tr(s/6 + E) / 2^{n/2} on the seven interior structures."""
    integrand = endomorphism_trace(n)
    t = tr_id(n)
    coeffs, residual, unique = decompose(integrand.scale(Fraction(1, t)), interior_classes(n))
    if not unique:
        raise ArithmeticError("interior structures are linearly dependent")
    return InteriorAssembly(interior_prefactor(n), t, coeffs, residual)
