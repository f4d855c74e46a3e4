"""Sparse commutative polynomials over :class:`Scalar` in indexed generators.

Generators are plain tuples whose first entry names the kind:

``("A", b, p)``          matrix entry a_b^p of J at the base point
``("DA", i, b, p)``      first derivative d/dx_i of a_b^p
``("HP",)``              h'(0)
``("XiT", k)``           tangential covector component xi_k, k < n
``("XiN",)``             normal component xi_n (only before restriction to |xi'| = 1)
``("XiTSq",)``           |xi'|^2 (only before restriction to |xi'| = 1)
``("S",)``               scalar curvature
``("GPair", u, v)``      metric pairing of two abstract vector labels, sorted
``("RCurv", u, v, w, z)``  curvature with the two antisymmetries u<->v, w<->z
``("Omega", m)``         opaque sphere constant

A monomial is a tuple of ``(generator, exponent)`` pairs sorted by
:func:`gen_key`.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .scalar import ONE, ZERO, GaussianRational, Scalar, format_scalar, scalar_eval

Generator = tuple
Monomial = Tuple[Tuple[Generator, int], ...]

_KIND_RANK = {"A": 0, "DA": 1, "HP": 2, "XiT": 3, "XiN": 4, "XiTSq": 5,
              "S": 6, "GPair": 7, "RCurv": 8, "Omega": 9}

# kinds whose indices are coordinate indices in 1..n
_INDEXED = {"A", "DA", "XiT"}


def gen_key(g: Generator):
    return (_KIND_RANK[g[0]], g)


def _merge(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    l1, l2 = len(m1), len(m2)
    while i < l1 and j < l2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        elif gen_key(g1) < gen_key(g2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def make_monomial(factors: Iterable[Tuple[Generator, int]]) -> Monomial:
    acc: Dict[Generator, int] = defaultdict(int)
    for g, e in factors:
        if e:
            acc[g] += e
    return tuple(sorted(((g, e) for g, e in acc.items() if e), key=lambda t: gen_key(t[0])))


def mono_str(m: Monomial) -> str:
    return "*".join(gen_str(g) + (f"^{e}" if e > 1 else "") for g, e in m) or "1"


def _label_str(lab) -> str:
    if isinstance(lab, tuple):
        head, *rest = lab
        return f"{head}[{','.join(str(r) for r in rest)}]" if rest else str(head)
    return str(lab)


def gen_str(g: Generator) -> str:
    kind = g[0]
    if kind in ("HP", "XiN", "XiTSq", "S"):
        return kind
    if kind in ("GPair", "RCurv"):
        return f"{kind}({', '.join(_label_str(x) for x in g[1:])})"
    return f"{kind}({','.join(str(x) for x in g[1:])})"


class FormalPoly:
    """Immutable sparse polynomial; ``n`` is the configured dimension (None = any)."""

    __slots__ = ("terms", "n", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None, n: Optional[int] = None,
                 _trusted: bool = False):
        if _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            t: Dict[Monomial, Scalar] = {}
            for m, c in (terms or {}).items():
                c = Scalar.coerce(c)
                if c.is_zero():
                    continue
                t[m] = t[m] + c if m in t else c
                if t[m].is_zero():
                    del t[m]
            self.terms = t
        self.n = n
        self._hash = None

    # -- construction helpers
    @staticmethod
    def const(c, n: Optional[int] = None) -> "FormalPoly":
        c = Scalar.coerce(c)
        return FormalPoly({(): c} if not c.is_zero() else {}, n, _trusted=True)

    @staticmethod
    def gen(g: Generator, n: Optional[int] = None, coeff=ONE) -> "FormalPoly":
        _check_gen(g, n)
        return FormalPoly({((g, 1),): Scalar.coerce(coeff)}, n)

    # -- structural
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _dim(self, other: "FormalPoly") -> Optional[int]:
        if self.n is None:
            return other.n
        if other.n is None or other.n == self.n:
            return self.n
        raise ValueError("dim-mismatch")

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant(self) -> Scalar:
        return self.terms.get((), ZERO)

    def generators(self) -> set:
        return {g for m in self.terms for g, _ in m}

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, FormalPoly):
            other = FormalPoly.const(other)
        n = self._dim(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        t = dict(a)
        for m, c in b.items():
            w = t.get(m)
            if w is None:
                t[m] = c
            else:
                w = w + c
                if w.is_zero():
                    del t[m]
                else:
                    t[m] = w
        return FormalPoly(t, n, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return FormalPoly({m: -c for m, c in self.terms.items()}, self.n, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, FormalPoly):
            other = FormalPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return FormalPoly.const(other) - self

    def scale(self, c) -> "FormalPoly":
        c = Scalar.coerce(c)
        if c.is_zero():
            return FormalPoly({}, self.n, _trusted=True)
        if c == ONE:
            return self
        return FormalPoly({m: v * c for m, v in self.terms.items()}, self.n, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, FormalPoly):
            return self.scale(other)
        n = self._dim(other)
        t: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge(m1, m2)
                c = c1 * c2
                w = t.get(m)
                t[m] = c if w is None else w + c
        return FormalPoly({m: c for m, c in t.items() if not c.is_zero()}, n, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = FormalPoly.const(1, self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, FormalPoly):
            try:
                other = FormalPoly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def map_monomials(self, f: Callable[[Monomial, Scalar], "FormalPoly"]) -> "FormalPoly":
        out = FormalPoly({}, self.n)
        acc: Dict[Monomial, Scalar] = {}
        for m, c in self.terms.items():
            for m2, c2 in f(m, c).terms.items():
                acc[m2] = acc[m2] + c2 if m2 in acc else c2
        out = FormalPoly({m: c for m, c in acc.items() if not c.is_zero()}, self.n, _trusted=True)
        return out

    def substitute(self, table: Mapping[Generator, "FormalPoly"]) -> "FormalPoly":
        """Replace generators by polynomials (generators not in ``table`` are kept)."""
        cache: Dict[Tuple[Generator, int], FormalPoly] = {}

        def power(g, e):
            key = (g, e)
            if key not in cache:
                cache[key] = table[g] ** e
            return cache[key]

        def f(m, c):
            keep = []
            out = FormalPoly.const(c, self.n)
            for g, e in m:
                if g in table:
                    out = out * power(g, e)
                else:
                    keep.append((g, e))
            if keep:
                out = out * FormalPoly({tuple(keep): ONE}, self.n, _trusted=True)
            return out
        return self.map_monomials(f)

    def evaluate(self, values: Mapping[Generator, complex], pi_value: float) -> complex:
        total = 0j
        for m, c in self.terms.items():
            v = scalar_eval(c, pi_value) if not c.is_zero() else 0j
            for g, e in m:
                if g not in values:
                    raise KeyError("cannot-instantiate")
                v *= values[g] ** e
            total += v
        return total

    def __repr__(self):
        return f"FormalPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            ms = mono_str(m)
            cs = format_scalar(c)
            if not m:
                parts.append(f"({cs})")
            elif c == ONE:
                parts.append(ms)
            else:
                parts.append(f"({cs})*{ms}")
        return " + ".join(parts)


def _mono_sort_key(m: Monomial):
    return tuple((gen_key(g), e) for g, e in m)


def _check_gen(g: Generator, n: Optional[int]) -> None:
    kind = g[0]
    if kind not in _KIND_RANK:
        raise ValueError(f"unknown generator kind {kind!r}")
    if n is not None and kind in _INDEXED:
        top = n - 1 if kind == "XiT" else n
        for x in g[1:]:
            if not 1 <= x <= top:
                raise ValueError(f"index out of range in {gen_str(g)} for n={n}")


# ------------------------------------------------------------ constructors

def A(b: int, p: int, n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(("A", b, p), n)


def DA(i: int, b: int, p: int, n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(("DA", i, b, p), n)


def HP(n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(("HP",), n)


def XiT(k: int, n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(("XiT", k), n)


def S(n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(("S",), n)


def omega_token(m: int) -> FormalPoly:
    return FormalPoly.gen(("Omega", m))


def gpair_gen(u, v) -> Generator:
    return ("GPair",) + tuple(sorted((u, v), key=_label_key))


def GPair(u, v, n: Optional[int] = None) -> FormalPoly:
    return FormalPoly.gen(gpair_gen(u, v), n)


def _label_key(lab):
    return repr(lab)


def rcurv_canonical(u, v, w, z) -> Tuple[int, Optional[Generator]]:
    """Sign and canonical generator of R(u,v,w,z); (0, None) when it vanishes."""
    if u == v or w == z:
        return 0, None
    sign = 1
    if _label_key(u) > _label_key(v):
        u, v = v, u
        sign = -sign
    if _label_key(w) > _label_key(z):
        w, z = z, w
        sign = -sign
    return sign, ("RCurv", u, v, w, z)


def RCurv(u, v, w, z, n: Optional[int] = None) -> FormalPoly:
    sign, g = rcurv_canonical(u, v, w, z)
    if g is None:
        return FormalPoly({}, n)
    return FormalPoly.gen(g, n, coeff=sign)


def poly_add(a: FormalPoly, b: FormalPoly) -> FormalPoly:
    return a + b


def poly_mul(a: FormalPoly, b: FormalPoly) -> FormalPoly:
    return a * b


def poly_sum(items: Iterable[FormalPoly], n: Optional[int] = None) -> FormalPoly:
    acc: Dict[Monomial, Scalar] = {}
    dim = n
    for p in items:
        if p.n is not None:
            if dim is not None and dim != p.n:
                raise ValueError("dim-mismatch")
            dim = p.n
        for m, c in p.terms.items():
            w = acc.get(m)
            acc[m] = c if w is None else w + c
    return FormalPoly({m: c for m, c in acc.items() if not c.is_zero()}, dim, _trusted=True)


# ------------------------------------------------------------ differentiation

def diff_x(p: FormalPoly, i: int) -> FormalPoly:
    """d/dx_i with A(b,q) -> DA(i,b,q); every other generator is an x-constant."""
    if p.n is not None and not 1 <= i <= p.n:
        raise ValueError(f"coordinate index {i} out of range")
    acc: Dict[Monomial, Scalar] = {}
    for m, c in p.terms.items():
        for pos, (g, e) in enumerate(m):
            if g[0] == "DA":
                raise ValueError("second-derivative-unsupported")
            if g[0] != "A":
                continue
            rest = list(m[:pos]) + ([(g, e - 1)] if e > 1 else []) + list(m[pos + 1:])
            new = _merge(tuple(rest), ((("DA", i, g[1], g[2]), 1),))
            val = c * e
            acc[new] = acc[new] + val if new in acc else val
    return FormalPoly({m: c for m, c in acc.items() if not c.is_zero()}, p.n, _trusted=True)


def diff_gen(p: FormalPoly, g: Generator) -> FormalPoly:
    """Partial derivative with respect to a single generator."""
    acc: Dict[Monomial, Scalar] = {}
    for m, c in p.terms.items():
        for pos, (h, e) in enumerate(m):
            if h != g:
                continue
            new = m[:pos] + (((h, e - 1),) if e > 1 else ()) + m[pos + 1:]
            val = c * e
            acc[new] = acc[new] + val if new in acc else val
    return FormalPoly({m: c for m, c in acc.items() if not c.is_zero()}, p.n, _trusted=True)


# ------------------------------------------------------------ J relations

def _sym(g: Generator) -> Generator:
    if g[0] == "A" and g[1] > g[2]:
        return ("A", g[2], g[1])
    return g


def symmetrize_A(p: FormalPoly) -> FormalPoly:
    acc: Dict[Monomial, Scalar] = {}
    for m, c in p.terms.items():
        if any(g[0] == "A" and g[1] > g[2] for g, _ in m):
            m = make_monomial((_sym(g), e) for g, e in m)
        acc[m] = acc[m] + c if m in acc else c
    return FormalPoly({m: c for m, c in acc.items() if not c.is_zero()}, p.n, _trusted=True)


def _remove(m: Monomial, g: Generator) -> Monomial:
    out = []
    done = False
    for h, e in m:
        if h == g and not done:
            done = True
            if e > 1:
                out.append((h, e - 1))
        else:
            out.append((h, e))
    if not done:
        raise KeyError(g)
    return tuple(out)


def _a(x: int, y: int) -> Generator:
    return ("A", min(x, y), max(x, y))


def _contraction_readings(m: Monomial):
    """Yield (stem, h) for every way m = stem * A{h,p} A{h,q}; stem = (M, p, q), p <= q."""
    a_factors = [(g, e) for g, e in m if g[0] == "A"]
    seen = set()
    for x in range(len(a_factors)):
        for y in range(x, len(a_factors)):
            g1, e1 = a_factors[x]
            g2, e2 = a_factors[y]
            if x == y and e1 < 2:
                continue
            for h in set(g1[1:]) & set(g2[1:]):
                p = g1[2] if g1[1] == h else g1[1]
                q = g2[2] if g2[1] == h else g2[1]
                p, q = min(p, q), max(p, q)
                rest = _remove(_remove(m, g1), g2)
                key = ((rest, p, q), h)
                if key not in seen:
                    seen.add(key)
                    yield key


def _derivative_readings(m: Monomial):
    """Yield ((M, i, p, q), b) for m = M * DA(i,b,p) * A{b,q}."""
    seen = set()
    for g, _ in m:
        if g[0] != "DA":
            continue
        _, i, b, p = g
        for h, _ in m:
            if h[0] != "A" or b not in h[1:]:
                continue
            q = h[2] if h[1] == b else h[1]
            rest = _remove(_remove(m, g), h)
            key = ((rest, i, p, q), b)
            if key not in seen:
                seen.add(key)
                yield key


def _apply_contraction_once(terms: Dict[Monomial, Scalar], n: int) -> bool:
    families: Dict[tuple, Dict[int, Monomial]] = defaultdict(dict)
    for m in terms:
        for stem, h in _contraction_readings(m):
            families[stem][h] = m
    for stem in sorted(families, key=repr):
        fam = families[stem]
        if len(fam) != n or set(fam) != set(range(1, n + 1)):
            continue
        coeffs = {terms[m] for m in fam.values()}
        if len(coeffs) != 1:
            continue
        c = coeffs.pop()
        rest, p, q = stem
        for m in fam.values():
            del terms[m]
        if p == q:
            terms[rest] = terms[rest] + c if rest in terms else c
            if terms[rest].is_zero():
                del terms[rest]
        return True
    return False


def _apply_derivative_once(terms: Dict[Monomial, Scalar], n: int) -> bool:
    families: Dict[tuple, Dict[int, Monomial]] = defaultdict(dict)
    for m in terms:
        for stem, b in _derivative_readings(m):
            families[stem][b] = m
    for stem in sorted(families, key=repr):
        rest, i, p, q = stem
        if p > q:
            continue
        fam = families[stem]
        if len(fam) != n or set(fam) != set(range(1, n + 1)):
            continue
        coeffs = {terms[m] for m in fam.values()}
        if len(coeffs) != 1:
            continue
        c = coeffs.pop()
        for m in fam.values():
            del terms[m]
        if p < q:
            # sum_b DA(i,b,p)A(b,q) = -sum_b DA(i,b,q)A(b,p)
            for b in range(1, n + 1):
                m2 = _merge(rest, make_monomial([(("DA", i, b, q), 1), (_a(b, p), 1)]))
                terms[m2] = terms[m2] - c if m2 in terms else -c
                if terms[m2].is_zero():
                    del terms[m2]
        return True
    return False


def substitute_J_relations(p: FormalPoly, n: Optional[int] = None) -> FormalPoly:
    """Rewrite with the relations of a symmetric orthogonal J, to a fixed point.

    * A(b,q) = A(q,b), stored with b <= q;
    * sum_h A(h,p) A(h,q) -> delta_pq, when the whole sum over h is present
      with one common coefficient;
    * sum_b [DA(i,b,p) A(b,q) + A(b,p) DA(i,b,q)] -> 0, likewise only in the
      fully summed form.  The family with p < q is traded for minus the
      family with p > q; p = q families vanish.
    """
    n = n or p.n
    if n is None:
        raise ValueError("substitute_J_relations needs the dimension")
    terms = dict(symmetrize_A(p).terms)
    while _apply_contraction_once(terms, n) or _apply_derivative_once(terms, n):
        pass
    return FormalPoly(terms, p.n, _trusted=True)


def kronecker(p: int, q: int) -> int:
    return 1 if p == q else 0


def collect_by(p: FormalPoly, pred: Callable[[Generator], bool]) -> Dict[Monomial, FormalPoly]:
    """Split p as sum_k key_k * coeff_k where key_k collects the generators with pred true."""
    out: Dict[Monomial, Dict[Monomial, Scalar]] = defaultdict(dict)
    for m, c in p.terms.items():
        key = tuple((g, e) for g, e in m if pred(g))
        rest = tuple((g, e) for g, e in m if not pred(g))
        out[key][rest] = c
    return {k: FormalPoly(v, p.n, _trusted=True) for k, v in out.items()}


def monomial_poly(m: Monomial, c=ONE, n: Optional[int] = None) -> FormalPoly:
    return FormalPoly({m: Scalar.coerce(c)}, n)


def iter_terms(p: FormalPoly) -> Iterator[Tuple[Monomial, Scalar]]:
    return iter(sorted(p.terms.items(), key=lambda t: _mono_sort_key(t[0])))
