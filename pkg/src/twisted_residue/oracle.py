"""Floating-point cross-checks for the exact engine.

Nothing here reuses the formal machinery: Clifford elements become gamma
matrices, symbols become numpy functions of a complex covector, derivatives
are contour integrals, and the xi_n integral and the pi+ projection are
computed by quadrature.
"""

from __future__ import annotations

import math
import time
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, linalg

from .clifford import CliffordElem, abstract_trace, blade_indices, tr_id
from .poly import FormalPoly
from .xi import RatXi, integrate_line, pi_plus

# -------------------------------------------------------------- gamma matrices

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class GammaRep:
    n: int
    matrices: np.ndarray  # shape (n, d, d); gamma_k = c(e_k)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def c(self, v: np.ndarray) -> np.ndarray:
        """c(v) for v of shape (..., n); result (..., d, d)."""
        return np.tensordot(v, self.matrices, axes=([-1], [0]))

    def blade(self, m: int) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for h in blade_indices(m):
            out = out @ self.matrices[h - 1]
        return out


def make_gamma(n: int) -> GammaRep:
    """Anti-Hermitian generators with g_i g_j + g_j g_i = -2 delta_ij."""
    if n == 3:
        mats = [1j * _SX, 1j * _SY, 1j * _SZ]
    elif n == 4:
        mats = [1j * np.kron(_SX, s) for s in (_SX, _SY, _SZ)] + [1j * np.kron(_SY, _I2)]
    else:
        raise ValueError(f"unsupported dimension {n}")
    return GammaRep(n, np.array(mats))


# -------------------------------------------------------------- J instances

@dataclass(frozen=True)
class JInstance:
    n: int
    J0: np.ndarray
    dJ: np.ndarray           # dJ[i-1] = d/dx_i J at x0
    Q: np.ndarray
    D: np.ndarray
    generators: np.ndarray   # antisymmetric K_i with dJ[i] = Q [K_i, D] Q^T
    hp: float
    scalar_curvature: float


def _random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def sample_J(seed: int, n: int, identity: bool = False) -> JInstance:
    """J0 = Q D Q^T with D = diag(+-1); dJ[i] = Q (K_i D - D K_i) Q^T, K_i antisymmetric.

    Such dJ is symmetric and anticommutes with J0, i.e. tangent to the set
    of symmetric orthogonal involutions.
    """
    rng = np.random.default_rng(seed)
    Q = _random_orthogonal(rng, n)
    if identity:
        d = np.ones(n)
    else:
        d = rng.choice([-1.0, 1.0], size=n)
        if abs(d.sum()) == n:
            d[rng.integers(n)] *= -1
    D = np.diag(d)
    K = rng.normal(size=(n, n, n))
    K = K - K.transpose(0, 2, 1)
    dJ = np.array([Q @ (k @ D - D @ k) @ Q.T for k in K])
    return JInstance(n, Q @ D @ Q.T, dJ, Q, D, K, float(rng.uniform(-1.5, 1.5)), float(rng.normal()))


def J_path(inst: JInstance, i: int, t: float) -> np.ndarray:
    """J along x_i: Q expm(t K_i) D expm(-t K_i) Q^T."""
    e = linalg.expm(t * inst.generators[i - 1])
    return inst.Q @ e @ inst.D @ e.T @ inst.Q.T


def instance_values(inst: JInstance) -> Dict[tuple, complex]:
    n = inst.n
    vals: Dict[tuple, complex] = {("HP",): inst.hp, ("S",): inst.scalar_curvature}
    for b in range(1, n + 1):
        for p in range(1, n + 1):
            vals[("A", b, p)] = inst.J0[b - 1, p - 1]
            for i in range(1, n + 1):
                vals[("DA", i, b, p)] = inst.dJ[i - 1][b - 1, p - 1]
    return vals


# -------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float


def quad_line(f: Callable[[float], complex], tol: float = 1e-10) -> QuadratureResult:
    """int_R f by adaptive quadrature after xi = tan(theta)."""
    def g(theta, part):
        c = math.cos(theta)
        v = f(math.tan(theta)) / (c * c)
        return v.real if part == 0 else v.imag
    lim = math.pi / 2
    re, e1 = integrate.quad(g, -lim, lim, args=(0,), epsabs=tol, epsrel=tol, limit=400)
    im, e2 = integrate.quad(g, -lim, lim, args=(1,), epsabs=tol, epsrel=tol, limit=400)
    err = e1 + e2
    if err > max(tol, tol * abs(complex(re, im))) * 10:
        raise ArithmeticError("quad-no-converge")
    return QuadratureResult(complex(re, im), err)


def _sphere_rule(m: int, level: int) -> Tuple[np.ndarray, np.ndarray]:
    if m == 2:
        k = 8 * level
        phi = 2 * np.pi * np.arange(k) / k
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(k, 2 * np.pi / k)
    if m == 3:
        z, wz = np.polynomial.legendre.leggauss(2 * level)
        k = 4 * level
        phi = 2 * np.pi * np.arange(k) / k
        Z, P = np.meshgrid(z, phi, indexing="ij")
        r = np.sqrt(1 - Z ** 2)
        pts = np.stack([r * np.cos(P), r * np.sin(P), Z], axis=-1).reshape(-1, 3)
        w = (wz[:, None] * np.full(k, 2 * np.pi / k)[None, :]).reshape(-1)
        return pts, w
    raise ValueError("sphere dimension must be 2 or 3")


def quad_sphere(g: Callable[[np.ndarray], np.ndarray], m: int, tol: float = 1e-10,
                max_level: int = 6) -> QuadratureResult:
    """Integral over the unit sphere in R^m (m = 2 circle, m = 3 sphere), refined until stable.

    ``g`` maps an (K, m) array of points to K values.
    """
    prev = None
    for level in range(1, max_level + 1):
        pts, w = _sphere_rule(m, level)
        val = complex(np.dot(w, g(pts)))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return QuadratureResult(val, abs(val - prev))
        prev = val
    raise ArithmeticError("quad-no-converge")


# -------------------------------------------------------------- contour derivatives

def contour_derivative(f: Callable[[np.ndarray], np.ndarray], z0, order: int,
                       radius: float = 0.2, points: int = 32) -> np.ndarray:
    """k-th derivative of an analytic f at z0 (any array shape) by the Cauchy formula.

    ``f`` receives z0 + r e^{i phi} with a new leading axis of length ``points``.
    """
    if order == 0:
        return f(np.asarray(z0)[None, ...])[0]
    phi = 2 * np.pi * np.arange(points) / points
    shift = radius * np.exp(1j * phi)
    z = np.asarray(z0)[None, ...] + shift.reshape((points,) + (1,) * np.ndim(z0))
    vals = f(z)
    weights = math.factorial(order) / points / shift ** order
    return np.tensordot(weights, vals, axes=([0], [0]))


# -------------------------------------------------------------- numeric symbols

class NumericSymbols:
    """The parametrix symbols at x0 as matrix-valued numpy functions.

    Covectors are arrays of shape (..., n), possibly complex.  The
    x-dependence near x0 is modelled to first order: along x_j the twist is
    J0 + t dJ_j; along the normal direction the tangential Clifford
    generators scale by (1 + h t / 2) and |xi|^2 becomes
    (1 + h t)|xi'|^2 + xi_n^2.
    """

    def __init__(self, inst: JInstance, gamma: Optional[GammaRep] = None):
        self.inst = inst
        self.n = inst.n
        self.g = gamma or make_gamma(inst.n)
        n, h = self.n, inst.hp
        cl = self.g.matrices
        p0 = np.zeros((self.g.dim, self.g.dim), dtype=complex)
        for i in range(n - 1):
            cje = self.g.c(inst.J0[i])
            p0 += 0.5 * h * cje @ cl[n - 1] @ cl[i] - 0.5 * h * cje @ cl[i] @ cl[n - 1]
        self.p0 = -0.25 * p0

    def q1(self, xi: np.ndarray, direction: Optional[int] = None, t=0.0) -> np.ndarray:
        """q_{-1} = i c(J xi)/|xi|^2, optionally displaced by t along x_direction."""
        n, h = self.n, self.inst.hp
        t = np.asarray(t)
        J = self.inst.J0
        v = np.einsum("hp,...p->...h", J, xi)
        if direction is not None:
            v = v + t[..., None] * np.einsum("hp,...p->...h", self.inst.dJ[direction - 1], xi)
        tang = np.sum(xi[..., : n - 1] ** 2, axis=-1)
        norm = tang + xi[..., n - 1] ** 2
        if direction == n:
            scale = np.ones(v.shape, dtype=complex)
            scale[..., : n - 1] = (1 + 0.5 * h * t)[..., None]
            v = v * scale
            norm = (1 + h * t) * tang + xi[..., n - 1] ** 2
        return 1j * self.g.c(v) / norm[..., None, None]

    def dx_q1(self, xi: np.ndarray, direction: int) -> np.ndarray:
        return contour_derivative(lambda t: self.q1(np.broadcast_to(xi, t.shape + xi.shape[-1:]), direction, t),
                                  np.zeros(xi.shape[:-1]), 1, radius=0.05, points=16)

    def q2(self, xi: np.ndarray) -> np.ndarray:
        """q_{-2} = -q_{-1}[p0 q_{-1} + sum_j d_xi_j p1 . (-i) d_x_j q_{-1}]."""
        q1 = self.q1(xi)
        inner = self.p0 @ q1
        for j in range(1, self.n + 1):
            dp1 = 1j * self.g.c(self.inst.J0[:, j - 1])
            inner = inner + dp1 @ (-1j * self.dx_q1(xi, j))
        return -q1 @ inner


def _with_xin(xi_t: np.ndarray, xin: np.ndarray) -> np.ndarray:
    """Covectors from K tangential parts (K, n-1) and xi_n values of shape (..., K, N)."""
    xin = np.asarray(xin)
    out = np.empty(xin.shape + (xi_t.shape[-1] + 1,), dtype=complex)
    out[..., :-1] = xi_t[:, None, :]
    out[..., -1] = xin
    return out


def _d_xin(f: Callable[[np.ndarray], np.ndarray], xin: np.ndarray, order: int) -> np.ndarray:
    return contour_derivative(f, xin, order, radius=0.05, points=8)


def _d_tangent(f_full: Callable[[np.ndarray], np.ndarray], xi: np.ndarray, k: int) -> np.ndarray:
    """d/dxi_k of f at covectors xi (..., n), before any sphere restriction."""
    def g(z):
        pts = np.broadcast_to(xi, z.shape + xi.shape[-1:]).copy()
        pts[..., k - 1] = z
        return f_full(pts)
    return contour_derivative(g, xi[..., k - 1], 1, radius=0.05, points=8)


@dataclass(frozen=True)
class CircleRule:
    """Trapezoid nodes on the Cayley circle w = (xi - i)/(xi + i), w = e^{i theta}."""
    theta: np.ndarray
    w: np.ndarray
    xi: np.ndarray
    jac: np.ndarray      # d xi / d theta times the trapezoid weight
    proj: np.ndarray     # pi+ as an (N, N) matrix acting on nodal values


@lru_cache(maxsize=8)
def circle_rule(nodes: int) -> CircleRule:
    k = np.arange(nodes)
    theta = 2 * np.pi * (k + 0.5) / nodes
    w = np.exp(1j * theta)
    xi = -1.0 / np.tan(theta / 2)
    jac = (2 * np.pi / nodes) * 0.5 / np.sin(theta / 2) ** 2
    # Laurent coefficients c_m = (1/N) sum_k f_k w_k^{-m}; pi+ keeps m < 0 and
    # subtracts their value at w = 1 (xi = infinity) so the result decays.
    m = np.arange(-(nodes // 2), 0)
    coef = np.exp(-1j * np.outer(m, theta)) / nodes          # (M, N)
    basis = w[:, None] ** m[None, :] - 1.0                     # (N, M)
    return CircleRule(theta, w, xi, jac, basis @ coef)


def numeric_boundary_integrand(left: Callable[[np.ndarray], np.ndarray],
                               right: Callable[[np.ndarray], np.ndarray], rule: CircleRule,
                               count: int) -> np.ndarray:
    """int_R tr[pi+(left) . right] d xi_n on the Cayley circle, for ``count`` sphere points at once."""
    grid = np.broadcast_to(rule.xi.astype(complex), (count, rule.xi.size))
    PL = np.einsum("kj,pjab->pkab", rule.proj, left(grid))
    tr = np.einsum("pkab,pkba->pk", PL, right(grid))
    return tr @ rule.jac


def numeric_case(sym: NumericSymbols, case: str, xi_t: np.ndarray, nodes: int = 96) -> np.ndarray:
    """One boundary case at unit tangential covectors xi_t (K, n-1), prefactor included."""
    n = sym.n
    rule = circle_rule(nodes)
    xi_t = np.atleast_2d(xi_t)
    K = xi_t.shape[0]

    def full(fn):
        return lambda z: fn(_with_xin(xi_t, z))

    if case == "psi1":
        total = np.zeros(K, dtype=complex)
        for i in range(1, n):
            left = full(lambda xi, i=i: _d_tangent(sym.q1, xi, i))
            right = lambda z, i=i: _d_xin(full(lambda xi: sym.dx_q1(xi, i)), z, 1)
            total += numeric_boundary_integrand(left, right, rule, K)
        return -total
    if case == "psi2":
        left = full(lambda xi: sym.dx_q1(xi, n))
        right = lambda z: _d_xin(full(sym.q1), z, 2)
        return -0.5 * numeric_boundary_integrand(left, right, rule, K)
    if case == "psi3":
        left = lambda z: _d_xin(full(sym.q1), z, 1)
        right = lambda z: _d_xin(full(lambda xi: sym.dx_q1(xi, n)), z, 1)
        return -0.5 * numeric_boundary_integrand(left, right, rule, K)
    if case == "psi4":
        right = lambda z: _d_xin(full(sym.q1), z, 1)
        return -1j * numeric_boundary_integrand(full(sym.q2), right, rule, K)
    if case == "psi5":
        right = lambda z: _d_xin(full(sym.q2), z, 1)
        return -1j * numeric_boundary_integrand(full(sym.q1), right, rule, K)
    if case == "phi":
        right = lambda z: _d_xin(full(sym.q1), z, 1)
        return numeric_boundary_integrand(full(sym.q1), right, rule, K)
    raise ValueError(f"unknown case {case!r}")


def numeric_case_integral(inst: JInstance, case: str, nodes: int = 96, tol: float = 1e-9) -> complex:
    """numeric_case integrated over the unit sphere of tangential covectors (true measure)."""
    sym = NumericSymbols(inst)
    m = inst.n - 1
    def g(pts, chunk=16):
        return np.concatenate([numeric_case(sym, case, pts[i:i + chunk], nodes) for i in range(0, len(pts), chunk)])
    return quad_sphere(g, m, tol=tol).value


# -------------------------------------------------------------- exact -> numeric

def evaluate_exact(p: FormalPoly, inst: JInstance, extra: Optional[Dict] = None) -> complex:
    vals = instance_values(inst)
    if extra:
        vals.update(extra)
    return p.evaluate(vals, math.pi)


def clifford_to_matrix(elem: CliffordElem, coeff: Callable[[object], complex], gamma: GammaRep) -> np.ndarray:
    out = np.zeros((gamma.dim, gamma.dim), dtype=complex)
    for m, c in elem.terms.items():
        out += coeff(c) * gamma.blade(m)
    return out


@dataclass
class CheckReport:
    check_id: str
    status: str
    expected: object = None
    computed: object = None
    elapsed: float = 0.0
    paper_ref: str = ""
    tolerance: Optional[float] = None
    detail: Dict = field(default_factory=dict)


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def check_exact_vs_numeric(check_id: str, exact: FormalPoly, numeric: complex, inst: JInstance,
                           tol: float, paper_ref: str = "") -> CheckReport:
    t0 = time.perf_counter()
    value = evaluate_exact(exact, inst)
    err = _rel(value, numeric)
    return CheckReport(check_id, "match" if err <= tol else "mismatch", [value.real, value.imag],
                       [numeric.real, numeric.imag], time.perf_counter() - t0, paper_ref, tol,
                       {"relative_error": err})


# -------------------------------------------------------------- specific checks

def check_pair_trace(seed: int, n: int = 4, tol: float = 1e-10) -> float:
    """Max relative error of tr[c(X)c(Y)] = -g(X,Y) tr[id] and the four-vector rule."""
    rng = np.random.default_rng(seed)
    g = make_gamma(n)
    worst = 0.0
    for k in (2, 4, 6):
        vecs = rng.normal(size=(k, n))
        mat = np.eye(g.dim, dtype=complex)
        for v in vecs:
            mat = mat @ g.c(v)
        numeric = np.trace(mat)
        labels = [("v", j) for j in range(k)]
        exact = abstract_trace(labels, n)
        vals = {}
        for a in range(k):
            for b in range(k):
                vals[("GPair",) + tuple(sorted([labels[a], labels[b]], key=repr))] = float(vecs[a] @ vecs[b])
        worst = max(worst, _rel(exact.evaluate(vals, math.pi), numeric))
    return worst


def check_gamma(n: int) -> float:
    g = make_gamma(n)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            anti = g.matrices[i] @ g.matrices[j] + g.matrices[j] @ g.matrices[i]
            target = -2.0 * (i == j) * np.eye(g.dim)
            worst = max(worst, float(np.abs(anti - target).max()))
    return worst


def check_J_instance(inst: JInstance, step: float = 1e-5) -> Dict[str, float]:
    """Constraint residuals and finite-difference agreement of the stored derivatives."""
    n = inst.n
    I = np.eye(n)
    out = {
        "involution": float(np.abs(inst.J0 @ inst.J0 - I).max()),
        "symmetry": float(np.abs(inst.J0 - inst.J0.T).max()),
        "anticommute": max(float(np.abs(d @ inst.J0 + inst.J0 @ d).max()) for d in inst.dJ),
        "dJ-symmetric": max(float(np.abs(d - d.T).max()) for d in inst.dJ),
    }
    fd_err = 0.0
    rel_err = 0.0
    for i in range(1, n + 1):
        fd = (J_path(inst, i, step) - J_path(inst, i, -step)) / (2 * step)
        fd_err = max(fd_err, float(np.abs(fd - inst.dJ[i - 1]).max()))
        # differentiated orthogonality on the finite-difference data:
        # sum_b dJ[b,p] J[b,q] + J[b,p] dJ[b,q] = 0
        rel_err = max(rel_err, float(np.abs(fd.T @ inst.J0 + inst.J0.T @ fd).max()))
    out["finite-difference"] = fd_err
    out["derivative-relation"] = rel_err
    return out


def lemma_relation_residual(inst: JInstance) -> float:
    """sum_b sum_{i<n} a_b^n d_i a_b^i + a_b^i d_i a_b^n, which must vanish."""
    n = inst.n
    J, dJ = inst.J0, inst.dJ
    s1 = sum(J[b, i] * dJ[i][b, n - 1] for b in range(n) for i in range(n - 1))
    s2 = sum(J[b, n - 1] * dJ[i][b, i] for b in range(n) for i in range(n - 1))
    return abs(s1 + s2)


def numeric_pi_plus(f: Callable[[complex], complex], z: complex) -> complex:
    """pi+ f at z (Im z < 0) through the Cauchy integral, by adaptive quadrature."""
    return quad_line(lambda eta: f(eta) / (z - eta), tol=1e-12).value / (2j * math.pi)


def check_pi_plus(p: RatXi, points: Sequence[complex] = (0.3 - 0.4j, -1.1 - 0.2j, 2.0 - 0.7j)) -> float:
    exact = pi_plus(p)
    f = lambda x: p.evaluate({}, math.pi, x)
    return max(_rel(exact.evaluate({}, math.pi, z), numeric_pi_plus(f, z)) for z in points)


def check_line_integral(p: RatXi) -> float:
    exact = integrate_line(p).evaluate({}, math.pi)
    numeric = quad_line(lambda x: p.evaluate({}, math.pi, x)).value
    return _rel(exact, numeric)


def check_symbols(inst: JInstance, exact_q1: CliffordElem, exact_q2: CliffordElem,
                  points: int = 3, seed: int = 0) -> float:
    """Restricted exact q_{-1}, q_{-2} against the numeric model at random covectors."""
    n = inst.n
    rng = np.random.default_rng(seed)
    sym = NumericSymbols(inst)
    worst = 0.0
    base = instance_values(inst)
    for _ in range(points):
        t = rng.normal(size=n - 1)
        t /= np.linalg.norm(t)
        xin = complex(rng.normal())
        vals = dict(base)
        for k in range(1, n):
            vals[("XiT", k)] = t[k - 1]
        coeff = lambda r: r.evaluate(vals, math.pi, xin)
        xi = _with_xin(t[None, :], np.array([[xin]]))[0, 0]
        for exact, numeric in ((exact_q1, sym.q1(xi)), (exact_q2, sym.q2(xi))):
            m = clifford_to_matrix(exact, coeff, sym.g)
            worst = max(worst, float(np.abs(m - numeric).max()) / max(1.0, float(np.abs(numeric).max())))
    return worst
