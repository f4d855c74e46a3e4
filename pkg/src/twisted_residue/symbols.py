"""Symbols of the J-twisted Dirac operator, its parametrix and boundary rules.

Before restriction a symbol is a :class:`GenSym`, a finite sum
sum_k C_k / |xi|^{2k} with Clifford coefficients C_k whose entries are
FormalPolys in the covector variables (``XiT``, ``XiN``, ``XiTSq``) and
in the J data.  All x-derivatives are taken at the base point x0 using the
collar-metric rules:

* d/dx_j |xi|^2 = 0 for j < n and h'(0) |xi'|^2 for j = n;
* d/dx_n c(dx_h) = h'(0)/2 c(dx_h) for h < n, and 0 otherwise;
* d/dx_j a_b^p = DA(j, b, p).

:func:`boundary_evaluate` then restricts to |xi'| = 1, turning each
coefficient into a :class:`RatXi` in xi_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .clifford import CliffordElem, blade_indices, cl_linear, cl_mul
from .poly import (FormalPoly, Monomial, diff_gen, diff_x, make_monomial, substitute_J_relations)
from .scalar import I, ONE, Scalar
from .xi import RatXi

XI_N = ("XiN",)
XI_T_SQ = ("XiTSq",)
HP_GEN = ("HP",)


def xi_gen(p: int, n: int):
    return XI_N if p == n else ("XiT", p)


def xi_poly(p: int, n: int) -> FormalPoly:
    return FormalPoly.gen(xi_gen(p, n), n)


class GenSym:
    """sum_k parts[k] / |xi|^{2k}; parts[k] is a CliffordElem over FormalPoly."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts: Optional[Dict[int, CliffordElem]] = None):
        self.n = n
        self.parts = {k: v for k, v in (parts or {}).items() if not v.is_zero()}

    @staticmethod
    def of(elem: CliffordElem, k: int = 0) -> "GenSym":
        return GenSym(elem.n, {k: elem})

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other: "GenSym") -> "GenSym":
        parts = dict(self.parts)
        for k, v in other.parts.items():
            parts[k] = parts[k] + v if k in parts else v
        return GenSym(self.n, parts)

    def __neg__(self):
        return GenSym(self.n, {k: -v for k, v in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GenSym):
            parts: Dict[int, CliffordElem] = {}
            for k1, v1 in self.parts.items():
                for k2, v2 in other.parts.items():
                    prod = cl_mul(v1, v2)
                    k = k1 + k2
                    parts[k] = parts[k] + prod if k in parts else prod
            return GenSym(self.n, parts)
        return GenSym(self.n, {k: v * other for k, v in self.parts.items()})

    def scale(self, c) -> "GenSym":
        c = Scalar.coerce(c)
        return GenSym(self.n, {k: v.map_coeffs(lambda x: x.scale(c)) for k, v in self.parts.items()})

    def dxi(self, j: int) -> "GenSym":
        """d/dxi_j on the unrestricted symbol (quotient rule on |xi|^{-2k})."""
        n = self.n
        g = xi_gen(j, n)
        xj = xi_poly(j, n)
        out = GenSym(n)
        for k, v in self.parts.items():
            def d(c: FormalPoly) -> FormalPoly:
                r = diff_gen(c, g)
                if j < n:
                    r = r + diff_gen(c, XI_T_SQ) * xj.scale(2)
                return r
            out = out + GenSym(n, {k: v.map_coeffs(d)})
            if k:
                out = out + GenSym(n, {k + 1: v.map_coeffs(lambda c: c * xj.scale(-2 * k))})
        return out

    def dx(self, j: int) -> "GenSym":
        """d/dx_j at x0 via the boundary rules."""
        n = self.n
        hp = FormalPoly.gen(HP_GEN, n)
        out = GenSym(n)
        for k, v in self.parts.items():
            for c in v.terms.values():
                if any(g == HP_GEN for m in c.terms for g, _ in m):
                    raise ValueError("no-boundary-rule")
            out = out + GenSym(n, {k: v.map_coeffs(lambda c: diff_x(c, j))})
            if j == n:
                blades = {}
                for m, c in v.terms.items():
                    tangential = sum(1 for h in blade_indices(m) if h < n)
                    if tangential:
                        blades[m] = c * hp.scale(Fraction(tangential, 2))
                out = out + GenSym(n, {k: CliffordElem(n, blades)})
                if k:
                    dnorm = hp * FormalPoly.gen(XI_T_SQ, n)
                    out = out + GenSym(n, {k + 1: v.map_coeffs(lambda c: c * dnorm.scale(-k))})
        return out

    def Dx(self, j: int) -> "GenSym":
        return self.dx(j).scale(-I)

    def map_polys(self, f) -> "GenSym":
        return GenSym(self.n, {k: v.map_coeffs(f) for k, v in self.parts.items()})


@dataclass(frozen=True)
class SymbolTerm:
    order: int
    value: object  # GenSym (general) or CliffordElem over RatXi (restricted)
    point: str = "general"


# ------------------------------------------------------------ building blocks

def c_J_dx(p: int, n: int) -> CliffordElem:
    """c[J(dx_p)] = sum_h A(h,p) c(dx_h)."""
    return cl_linear([(h, FormalPoly.gen(("A", h, p), n)) for h in range(1, n + 1)], n)


def c_J_e(i: int, n: int) -> CliffordElem:
    """c[J(e_i)] = sum_mu A(i,mu) c(dx_mu), the index placement used for the zeroth-order symbol."""
    return cl_linear([(mu, FormalPoly.gen(("A", i, mu), n)) for mu in range(1, n + 1)], n)


def c_J_xi(n: int) -> CliffordElem:
    """c[J(xi)] = sum_{p,h} xi_p A(h,p) c(dx_h)."""
    out = CliffordElem(n)
    for p in range(1, n + 1):
        out = out + c_J_dx(p, n) * xi_poly(p, n)
    return out


def c_dx(h: int, n: int) -> CliffordElem:
    return CliffordElem.basis(n, h, FormalPoly.const(1, n))


def connection_at_x0(n: int) -> Dict[Tuple[int, int, int], FormalPoly]:
    """Nonzero spin-connection coefficients omega_{j,k}(e_i) at x0: (i, j, k) -> value."""
    half_hp = FormalPoly.gen(HP_GEN, n).scale(Fraction(1, 2))
    table = {}
    for i in range(1, n):
        table[(i, n, i)] = half_hp
        table[(i, i, n)] = -half_hp
    return table


def symbol_DJ(n: int) -> Tuple[SymbolTerm, SymbolTerm]:
    """(p1, p0): p1 = i c[J(xi)]; p0 = -1/4 sum omega_{j,k}(e_i) c[J(e_i)] c(e_j) c(e_k) at x0."""
    if n not in (3, 4):
        raise ValueError("dimension must be 3 or 4")
    p1 = GenSym.of(c_J_xi(n)).scale(I)
    p0 = CliffordElem(n)
    for (i, j, k), w in connection_at_x0(n).items():
        word = cl_mul(cl_mul(c_J_e(i, n), c_dx(j, n)), c_dx(k, n))
        p0 = p0 + word * w
    p0 = p0 * FormalPoly.const(Fraction(-1, 4), n)
    return SymbolTerm(1, p1), SymbolTerm(0, GenSym.of(p0), "x0")


def parametrix(n: int) -> Tuple[SymbolTerm, SymbolTerm]:
    """(q_{-1}, q_{-2}) from q_{-1} = p1/|xi|^2 and
    q_{-2} = -q_{-1} [p0 q_{-1} + sum_j d_{xi_j} p1 D_{x_j} q_{-1}]."""
    p1, p0 = symbol_DJ(n)
    q1 = GenSym(n, {1: p1.value.parts[0]})
    inner = p0.value * q1
    for j in range(1, n + 1):
        inner = inner + p1.value.dxi(j) * q1.Dx(j)
    q2 = -(q1 * inner)
    return SymbolTerm(-1, q1), SymbolTerm(-2, q2, "x0")


def compose_symbols(a: Sequence[SymbolTerm], b: Sequence[SymbolTerm], orders: Iterable[int]) -> Dict[int, GenSym]:
    """Components of sigma(A o B) = sum_alpha 1/alpha! d_xi^alpha sigma(A) D_x^alpha sigma(B).

    Multi-indices with |alpha| >= 2 must annihilate sigma(A) (true for a
    first-order differential operator); otherwise the truncation is too
    shallow for the supported first x-derivatives.
    """
    n = a[0].value.n
    amap = {t.order: t.value for t in a}
    bmap = {t.order: t.value for t in b}
    b_low, b_high = min(bmap), max(bmap)
    for sa in amap.values():
        for j in range(1, n + 1):
            if any(not sa.dxi(j).dxi(k).is_zero() for k in range(1, n + 1)):
                raise ValueError("truncation-too-shallow")
    out: Dict[int, GenSym] = {}
    for o in orders:
        total = GenSym(n)
        for oa, sa in amap.items():
            for alpha in (0, 1):
                ob = o - oa + alpha
                if ob > b_high:
                    continue
                if ob < b_low:
                    raise ValueError("truncation-too-shallow")
                sb = bmap.get(ob)
                if sb is None:
                    continue
                if alpha == 0:
                    total = total + sa * sb
                    continue
                for j in range(1, n + 1):
                    da = sa.dxi(j)
                    if not da.is_zero():
                        total = total + da * sb.Dx(j)
        out[o] = total
    return out


# ------------------------------------------------------------ restriction

def restrict_poly(c: FormalPoly, k: int, n: int) -> RatXi:
    """c / |xi|^{2k} at |xi'| = 1, as a rational function of xi_n."""
    by_power: Dict[int, Dict[Monomial, Scalar]] = {}
    for m, v in c.terms.items():
        e_n = 0
        rest = []
        for g, e in m:
            if g == XI_N:
                e_n = e
            elif g == XI_T_SQ:
                continue
            else:
                rest.append((g, e))
        bucket = by_power.setdefault(e_n, {})
        key = tuple(rest)
        bucket[key] = bucket[key] + v if key in bucket else v
    if not by_power:
        return RatXi((), 0, 0, n)
    deg = max(by_power)
    num = [FormalPoly({m: v for m, v in by_power.get(d, {}).items() if not v.is_zero()}, n,
                      _trusted=True) for d in range(deg + 1)]
    return RatXi(num, k, k, n)


def boundary_evaluate(t) -> CliffordElem:
    """Restrict a general symbol at x0 to |xi'| = 1 (|xi|^2 -> 1 + xi_n^2)."""
    sym = t.value if isinstance(t, SymbolTerm) else t
    n = sym.n
    out = CliffordElem(n)
    for k, v in sym.parts.items():
        out = out + CliffordElem(n, {m: restrict_poly(c, k, n) for m, c in v.terms.items()})
    return out


def reduce_on_sphere(c: FormalPoly, n: int) -> FormalPoly:
    """Use |xi'| = 1 to eliminate xi_{n-1}^2 (only for identity checks, never before integration)."""
    last = ("XiT", n - 1)
    others = FormalPoly.const(1, n)
    for k in range(1, n - 1):
        others = others - FormalPoly.gen(("XiT", k), n) ** 2
    out = FormalPoly({}, n)
    for m, v in c.terms.items():
        e = dict(m).get(last, 0)
        rest = tuple((g, x) for g, x in m if g != last)
        piece = FormalPoly({rest: v}, n)
        piece = piece * others ** (e // 2)
        if e % 2:
            piece = piece * FormalPoly.gen(last, n)
        out = out + piece
    return out


def simplify_restricted(elem: CliffordElem, relations: bool = True) -> CliffordElem:
    """Apply J relations and |xi'| = 1 to every coefficient of a restricted symbol."""
    n = elem.n

    def f(r: RatXi) -> RatXi:
        coeffs = []
        for c in r.num:
            if relations:
                c = substitute_J_relations(c, n)
            coeffs.append(reduce_on_sphere(c, n))
        return RatXi(coeffs, r.a, r.b, n)
    return CliffordElem(n, {m: f(c) for m, c in elem.terms.items()})


def specialize_identity(p: FormalPoly, n: int) -> FormalPoly:
    """J = identity: A(b,p) -> delta_bp, DA -> 0."""
    table = {}
    for g in p.generators():
        if g[0] == "A":
            table[g] = FormalPoly.const(1 if g[1] == g[2] else 0, n)
        elif g[0] == "DA":
            table[g] = FormalPoly({}, n)
    return p.substitute(table) if table else p


@dataclass(frozen=True)
class DefectReport:
    order0_is_identity: bool
    order_minus1_factorizes: bool
    order_minus1_vanishes: bool


def parametrix_defect(n: int) -> DefectReport:
    """Check that sigma(D_J) o (q_{-1} + q_{-2}) = 1 up to order -2.

    Order 0 is p1 q_{-1}, which reduces to 1 once the J relations are
    applied.  Order -1 is checked in two exact steps: it equals
    (1 - p1 q_{-1}) X as an identity of general symbols, with X the bracket
    defining q_{-2}; and the left factor vanishes by the order 0 result.
    Expanding the product first would spread each orthogonality sum across
    unrelated monomials, which the pattern-based relation engine cannot see.
    """
    p1, p0 = symbol_DJ(n)
    q1, q2 = parametrix(n)
    comp = compose_symbols([p1, p0], [q1, q2], [0, -1])
    one_elem = CliffordElem.scalar(n, RatXi.const(FormalPoly.const(1, n), n))
    order0 = simplify_restricted(boundary_evaluate(comp[0]))
    order0_ok = order0 == one_elem
    one = GenSym.of(CliffordElem.scalar(n, FormalPoly.const(1, n)))
    bracket = p0.value * q1.value
    for j in range(1, n + 1):
        bracket = bracket + p1.value.dxi(j) * q1.value.Dx(j)
    factored = (one - p1.value * q1.value) * bracket
    factor_ok = (comp[-1] - factored).is_zero()
    return DefectReport(order0_ok, factor_ok, order0_ok and factor_ok)
