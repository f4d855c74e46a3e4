"""Rational functions of xi_n with poles only at +i and -i.

A :class:`RatXi` is N(xi_n) / ((xi_n - i)^a (xi_n + i)^b) where N has
FormalPoly coefficients.  Values are kept reduced, so structural equality is
mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence, Tuple

from .poly import FormalPoly, omega_token
from .scalar import I_G, ONE, PI, GaussianRational, Scalar

Coeffs = Tuple[FormalPoly, ...]

_I = Scalar.coerce(I_G)
_MINUS_I = -_I
_TWO_PI_I = Scalar({1: GaussianRational(0, 2)})


def _zero(n) -> FormalPoly:
    return FormalPoly({}, n, _trusted=True)


def _trim(c: Sequence[FormalPoly]) -> Coeffs:
    c = list(c)
    while c and c[-1].is_zero():
        c.pop()
    return tuple(c)


def _padd(p: Sequence[FormalPoly], q: Sequence[FormalPoly]) -> Coeffs:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return _trim(out)


def _pmul(p: Sequence[FormalPoly], q: Sequence[FormalPoly]) -> Coeffs:
    if not p or not q:
        return ()
    out: List[Optional[FormalPoly]] = [None] * (len(p) + len(q) - 1)
    for j, a in enumerate(p):
        if a.is_zero():
            continue
        for k, b in enumerate(q):
            if b.is_zero():
                continue
            t = a * b
            out[j + k] = t if out[j + k] is None else out[j + k] + t
    n = p[0].n if p[0].n is not None else q[0].n
    return _trim([x if x is not None else _zero(n) for x in out])


def _pscale(p: Sequence[FormalPoly], s) -> Coeffs:
    if isinstance(s, FormalPoly):
        return _trim([c * s for c in p])
    return _trim([c.scale(s) for c in p])


def _mul_linear(p: Sequence[FormalPoly], root: Scalar, k: int = 1) -> Coeffs:
    """Multiply by (xi - root)^k."""
    out = tuple(p)
    for _ in range(k):
        if not out:
            return ()
        shifted = [_zero(out[0].n)] + list(out)
        scaled = [c.scale(-root) for c in out] + [_zero(out[0].n)]
        out = _trim([x + y for x, y in zip(shifted, scaled)])
    return out


def _eval_at(p: Sequence[FormalPoly], root: Scalar) -> FormalPoly:
    acc = None
    power = ONE
    for c in p:
        t = c.scale(power)
        acc = t if acc is None else acc + t
        power = power * root
    return acc if acc is not None else _zero(None)


def _divide_linear(p: Sequence[FormalPoly], root: Scalar) -> Coeffs:
    """Quotient of p by (xi - root); caller guarantees exact divisibility."""
    d = len(p) - 1
    if d < 1:
        return ()
    q: List[FormalPoly] = [None] * d  # type: ignore[list-item]
    q[d - 1] = p[d]
    for k in range(d - 1, 0, -1):
        q[k - 1] = p[k] + q[k].scale(root)
    return _trim(q)


def _deriv(p: Sequence[FormalPoly]) -> Coeffs:
    return _trim([c.scale(k) for k, c in enumerate(p) if k > 0])


class RatXi:
    __slots__ = ("num", "a", "b", "n")

    def __init__(self, num: Sequence[FormalPoly], a: int = 0, b: int = 0, n: Optional[int] = None,
                 _reduced: bool = False):
        num = _trim(num)
        if n is None:
            for c in num:
                if c.n is not None:
                    n = c.n
                    break
        if not num:
            a = b = 0
        elif not _reduced:
            while a > 0 and _eval_at(num, _I).is_zero():
                num = _divide_linear(num, _I)
                a -= 1
            while b > 0 and _eval_at(num, _MINUS_I).is_zero():
                num = _divide_linear(num, _MINUS_I)
                b -= 1
        self.num: Coeffs = num
        self.a = a
        self.b = b
        self.n = n

    # -- constructors
    @staticmethod
    def const(c, n: Optional[int] = None) -> "RatXi":
        if not isinstance(c, FormalPoly):
            c = FormalPoly.const(c, n)
        return RatXi((c,), 0, 0, n)

    @staticmethod
    def from_scalars(coeffs: Sequence, a: int = 0, b: int = 0, n: Optional[int] = None) -> "RatXi":
        return RatXi([c if isinstance(c, FormalPoly) else FormalPoly.const(c, n) for c in coeffs], a, b, n)

    def is_zero(self) -> bool:
        return not self.num

    def degree(self) -> int:
        return len(self.num) - 1

    def _zero_like(self) -> FormalPoly:
        return _zero(self.n)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, RatXi):
            other = RatXi.const(other, self.n)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = max(self.a, other.a), max(self.b, other.b)
        p = _mul_linear(_mul_linear(self.num, _I, a - self.a), _MINUS_I, b - self.b)
        q = _mul_linear(_mul_linear(other.num, _I, a - other.a), _MINUS_I, b - other.b)
        return RatXi(_padd(p, q), a, b, self.n or other.n)

    __radd__ = __add__

    def __neg__(self):
        return RatXi(tuple(-c for c in self.num), self.a, self.b, self.n, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, RatXi):
            other = RatXi.const(other, self.n)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatXi):
            if self.is_zero() or other.is_zero():
                return RatXi((), 0, 0, self.n or other.n)
            return RatXi(_pmul(self.num, other.num), self.a + other.a, self.b + other.b,
                         self.n or other.n)
        if isinstance(other, FormalPoly):
            return RatXi(_pscale(self.num, other), self.a, self.b, self.n or other.n)
        return RatXi(_pscale(self.num, Scalar.coerce(other)), self.a, self.b, self.n,
                     _reduced=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RatXi):
            return NotImplemented
        return (self - other).is_zero()

    def structurally_equal(self, other: "RatXi") -> bool:
        return self.num == other.num and self.a == other.a and self.b == other.b

    def map_coeffs(self, f) -> "RatXi":
        return RatXi(tuple(f(c) for c in self.num), self.a, self.b, self.n)

    def evaluate(self, values, pi_value: float, xi: complex) -> complex:
        num = sum(c.evaluate(values, pi_value) * xi ** k for k, c in enumerate(self.num))
        return num / ((xi - 1j) ** self.a * (xi + 1j) ** self.b)

    def __repr__(self):
        num = " + ".join(f"({c})*xi^{k}" for k, c in enumerate(self.num) if not c.is_zero())
        return f"RatXi([{num or '0'}] / ((xi-i)^{self.a} (xi+i)^{self.b}))"


def ratxi_add(p: RatXi, q: RatXi) -> RatXi:
    return p + q


def ratxi_mul(p: RatXi, q: RatXi) -> RatXi:
    return p * q


def xi_n(n: Optional[int] = None) -> RatXi:
    return RatXi((_zero(n), FormalPoly.const(1, n)), 0, 0, n)


def dxi_n(p: RatXi) -> RatXi:
    if p.is_zero():
        return p
    # d/dxi [N (xi-i)^-a (xi+i)^-b] = [N'(xi-i)(xi+i) - aN(xi+i) - bN(xi-i)] / (xi-i)^(a+1)(xi+i)^(b+1)
    N = p.num
    t1 = _mul_linear(_mul_linear(_deriv(N), _I), _MINUS_I)
    t2 = _pscale(_mul_linear(N, _MINUS_I), Scalar.coerce(-p.a)) if p.a else ()
    t3 = _pscale(_mul_linear(N, _I), Scalar.coerce(-p.b)) if p.b else ()
    return RatXi(_padd(_padd(t1, t2), t3), p.a + 1, p.b + 1, p.n)


def _decays(p: RatXi) -> bool:
    return p.is_zero() or p.degree() < p.a + p.b


def _taylor_at_i(p: RatXi, order: int) -> List[FormalPoly]:
    """Coefficients of t^0..t^order of N(i+t) (2i+t)^-b around xi = i."""
    N = p.num
    # Taylor shift N(i + t)
    shifted: List[FormalPoly] = []
    work = list(N)
    for k in range(order + 1):
        if not work:
            shifted.append(_zero(p.n))
            continue
        shifted.append(_eval_at(work, _I).scale(Fraction(1, factorial(k))))
        work = list(_deriv(work))
    # (2i + t)^-b = (2i)^-b * sum_m binom(-b, m) (t / 2i)^m
    two_i = GaussianRational(0, 2)
    base = two_i ** (-p.b)
    series = []
    for m in range(order + 1):
        binom = Fraction(1)
        for r in range(m):
            binom *= Fraction(-p.b - r, r + 1)
        series.append(Scalar.coerce(base * binom * two_i ** (-m)))
    out = []
    for k in range(order + 1):
        acc = _zero(p.n)
        for j in range(k + 1):
            acc = acc + shifted[j].scale(series[k - j])
        out.append(acc)
    return out


def pi_plus(p: RatXi) -> RatXi:
    """Principal part at xi_n = +i (the upper-half-plane part of a decaying p)."""
    if not _decays(p):
        raise ValueError("pi-plus-domain")
    if p.is_zero() or p.a == 0:
        return RatXi((), 0, 0, p.n)
    a = p.a
    taylor = _taylor_at_i(p, a - 1)
    # principal part sum_{k=1..a} c_k (xi-i)^-k with c_k = taylor[a-k]
    # numerator sum_k c_k (xi - i)^(a-k) = sum_j taylor[j] (xi - i)^j
    num: Coeffs = ()
    for j in range(a):
        if taylor[j].is_zero():
            continue
        num = _padd(num, _mul_linear((taylor[j],), _I, j))
    return RatXi(num, a, 0, p.n)


def pi_minus(p: RatXi) -> RatXi:
    return p - pi_plus(p)


def residue_taylor(p: RatXi) -> FormalPoly:
    """Residue at +i read off the Taylor expansion (used by pi_plus)."""
    if p.is_zero() or p.a == 0:
        return _zero(p.n)
    return _taylor_at_i(p, p.a - 1)[p.a - 1]


def residue_derivative(p: RatXi) -> FormalPoly:
    """Residue at +i by 1/(a-1)! d^{a-1}/dxi^{a-1} [p (xi - i)^a] at xi = i."""
    if p.is_zero() or p.a == 0:
        return _zero(p.n)
    g = RatXi(p.num, 0, p.b, p.n, _reduced=True)
    for _ in range(p.a - 1):
        g = dxi_n(g)
    # g has no pole at +i: value N(i) / (2i)^b
    val = _eval_at(g.num, _I).scale(GaussianRational(0, 2) ** (-g.b))
    if g.a:
        raise AssertionError("unexpected pole after clearing (xi - i)^a")
    return val.scale(Fraction(1, factorial(p.a - 1)))


def pi_prime(p: RatXi) -> FormalPoly:
    """(1/2pi) times the integral along the upper contour, i.e. i * Res_{+i}."""
    if not _decays(p):
        raise ValueError("pi-prime-domain")
    return residue_derivative(p).scale(_I)


def integrate_line(p: RatXi) -> FormalPoly:
    """Integral over the real line, 2 pi i times the residue at +i."""
    if p.is_zero():
        return _zero(p.n)
    if p.degree() > p.a + p.b - 2:
        raise ValueError("not-integrable")
    return residue_derivative(p).scale(_TWO_PI_I)


# ------------------------------------------------------------ sphere moments

def _gamma_half(e: int) -> Tuple[Fraction, int]:
    """Gamma((e+1)/2) as (rational, power of sqrt(pi))."""
    if e % 2:  # integer argument (e+1)/2
        return Fraction(factorial((e + 1) // 2 - 1)), 0
    k = e // 2  # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    return Fraction(factorial(2 * k), 4 ** k * factorial(k)), 1


def sphere_moment(exponents: Sequence[int], m: int) -> Scalar:
    """Integral of prod xi_k^{e_k} over the unit sphere in R^m."""
    if len(exponents) != m:
        raise ValueError("exponent list length must equal m")
    if any(e % 2 for e in exponents):
        return Scalar()
    value, roots = Fraction(2), 0
    for e in exponents:
        r, s = _gamma_half(e)
        value *= r
        roots += s
    total = sum(exponents) + m  # Gamma(total / 2)
    if total % 2 == 0:
        value /= factorial(total // 2 - 1)
    else:
        k = (total - 1) // 2
        value /= Fraction(factorial(2 * k), 4 ** k * factorial(k))
        roots -= 1
    if roots % 2:
        raise AssertionError("odd power of sqrt(pi) in an even sphere moment")
    return Scalar({roots // 2: GaussianRational(value)})


SPHERE_CONVENTIONS = ("omega-normalized", "geometric")


def sphere_integrate(p: FormalPoly, n: int, convention: str = "omega-normalized") -> FormalPoly:
    """Integrate the XiT-dependence of p over |xi'| = 1 in R^{n-1}.

    ``geometric`` uses the true moments.  ``omega-normalized`` factors out the
    sphere constant Omega_{n-1} as an opaque generator and weights each
    monomial by 1 (degree 0) or by its true moment (degree >= 2); this is the
    normalization in which the expected boundary coefficients are quoted.
    """
    if convention not in SPHERE_CONVENTIONS:
        raise ValueError(f"unknown sphere convention {convention!r}")
    m = n - 1
    om = omega_token(m) if convention == "omega-normalized" else None
    acc = {}
    for mono, c in p.terms.items():
        exps = [0] * m
        rest = []
        for g, e in mono:
            if g[0] == "XiT":
                exps[g[1] - 1] += e
            elif g[0] in ("XiN", "XiTSq"):
                raise ValueError("sphere integration needs a restricted symbol")
            else:
                rest.append((g, e))
        if convention == "geometric":
            w = sphere_moment(exps, m)
        elif any(exps):
            w = sphere_moment(exps, m)
        else:
            w = ONE
        if w.is_zero():
            continue
        key = tuple(rest)
        val = c * w
        acc[key] = acc[key] + val if key in acc else val
    out = FormalPoly({k: v for k, v in acc.items() if not v.is_zero()}, p.n, _trusted=True)
    if om is not None:
        out = out * om
    return out
