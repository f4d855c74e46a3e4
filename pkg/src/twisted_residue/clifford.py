"""Clifford algebra with c_i c_j + c_j c_i = -2 delta_ij over a commutative ring.

Basis blades are bitmasks (bit h-1 stands for c(dx_h)); coefficients can be
any ring element exposing ``+``, ``*``, unary ``-`` and ``is_zero()``
(FormalPoly and RatXi both qualify).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import FormalPoly, gpair_gen
from .scalar import ONE


def tr_id(n: int) -> int:
    """Trace of the identity on spinors: 4 for n=4, 2 for n=3."""
    return 2 ** (n // 2)


@lru_cache(maxsize=None)
def blade_product(a: int, b: int) -> Tuple[int, int]:
    """(sign, blade) with c_a c_b = sign * c_blade."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    contractions = bin(a & b).count("1")
    sign = -1 if (swaps + contractions) % 2 else 1
    return sign, a ^ b


def blade_indices(m: int) -> List[int]:
    return [h + 1 for h in range(m.bit_length()) if m >> h & 1]


def blade_of(indices: Sequence[int]) -> Tuple[int, int]:
    """Normal-order an arbitrary word c_{i1} ... c_{ik}; returns (sign, blade)."""
    sign, blade = 1, 0
    for h in indices:
        s, blade = blade_product(blade, 1 << (h - 1))
        sign *= s
    return sign, blade


def _neg(x):
    return -x


class CliffordElem:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[int, object]] = None):
        self.n = n
        t = {}
        for m, c in (terms or {}).items():
            if m >> n:
                raise ValueError(f"blade {m:b} exceeds dimension {n}")
            if not c.is_zero():
                t[m] = c
        self.terms = t

    @staticmethod
    def scalar(n: int, c) -> "CliffordElem":
        return CliffordElem(n, {0: c})

    @staticmethod
    def basis(n: int, h: int, one) -> "CliffordElem":
        return CliffordElem(n, {1 << (h - 1): one})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CliffordElem"):
        if self.n != other.n:
            raise ValueError("dim-mismatch")

    def __add__(self, other: "CliffordElem") -> "CliffordElem":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return CliffordElem(self.n, t)

    def __neg__(self):
        return CliffordElem(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CliffordElem):
            return cl_mul(self, other)
        return CliffordElem(self.n, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return CliffordElem(self.n, {m: other * c for m, c in self.terms.items()})

    def map_coeffs(self, f) -> "CliffordElem":
        return CliffordElem(self.n, {m: f(c) for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CliffordElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        inner = ", ".join(f"{blade_indices(m)}: {c}" for m, c in sorted(self.terms.items()))
        return f"CliffordElem(n={self.n}, {{{inner}}})"


def cl_mul(a: CliffordElem, b: CliffordElem) -> CliffordElem:
    a._check(b)
    t: Dict[int, object] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = blade_product(ma, mb)
            c = ca * cb
            if sign < 0:
                c = -c
            t[m] = t[m] + c if m in t else c
    return CliffordElem(a.n, t)


def cl_linear(coeffs: Iterable[Tuple[int, object]], n: int) -> CliffordElem:
    t: Dict[int, object] = {}
    for h, c in coeffs:
        if not 1 <= h <= n:
            raise ValueError(f"index {h} out of range")
        m = 1 << (h - 1)
        t[m] = t[m] + c if m in t else c
    return CliffordElem(n, t)


def cl_trace(a: CliffordElem):
    """Scalar part times tr[id]; None-safe zero comes back as integer 0."""
    c = a.terms.get(0)
    if c is None:
        return 0
    return c * tr_id(a.n)


def cl_trace_product(a: CliffordElem, b: CliffordElem):
    """tr[a b] without forming the full product (only matching blades pair up)."""
    a._check(b)
    acc = None
    for m, ca in a.terms.items():
        cb = b.terms.get(m)
        if cb is None:
            continue
        sign, _ = blade_product(m, m)
        term = ca * cb
        if sign < 0:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return 0
    return acc * tr_id(a.n)


def abstract_trace(vs: Sequence, n: int) -> FormalPoly:
    """tr[c(v1)...c(vk)] for abstract vectors by perfect matchings.

    Each pairing contributes its crossing sign times prod(-GPair(u, v)),
    and the whole sum carries tr[id].
    """
    return _wick(tuple(vs)).scale(tr_id(n))


@lru_cache(maxsize=4096)
def _wick(vs: tuple) -> FormalPoly:
    if not vs:
        return FormalPoly.const(1)
    if len(vs) % 2:
        return FormalPoly({})
    first, rest = vs[0], vs[1:]
    out = FormalPoly({})
    for j, v in enumerate(rest):
        sign = -1 if j % 2 else 1
        pair = FormalPoly({((gpair_gen(first, v), 1),): ONE})
        out = out + (pair * _wick(rest[:j] + rest[j + 1:])).scale(-sign)
    return out
