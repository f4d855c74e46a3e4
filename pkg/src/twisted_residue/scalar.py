"""Exact scalars: Gaussian rationals and polynomials in a formal constant pi.

Rationals are stdlib ``Fraction``.  A :class:`Scalar` is a polynomial in the
indeterminate ``pi`` with Gaussian-rational coefficients; equality is
coefficient-wise, so ``pi`` never turns into a float except in
:func:`scalar_eval`.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Dict, Iterable, Union

Number = Union[int, Fraction]


class GaussianRational:
    """Element re + im*i of Q(i), immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        d = self.norm()
        if not d:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / d, -self.im / d)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE_G, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)


ONE_G = GaussianRational(1)
ZERO_G = GaussianRational(0)
I_G = GaussianRational(0, 1)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_gaussian(g: GaussianRational) -> str:
    """Canonical text: "a", "b*i" or "a+b*i" (rational parts as p/q)."""
    if not g.im:
        return _frac_str(g.re)
    im = "i" if g.im == 1 else "-i" if g.im == -1 else f"{_frac_str(g.im)}*i"
    if not g.re:
        return im
    sign = "" if im.startswith("-") else "+"
    return f"{_frac_str(g.re)}{sign}{im}"


class Scalar:
    """Polynomial in the formal constant pi with coefficients in Q(i)."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Dict[int, GaussianRational] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = GaussianRational.coerce(v)
                if k < 0:
                    raise ValueError("negative pi exponent")
                if not v.is_zero():
                    c[k] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[int, GaussianRational]) -> "Scalar":
        s = cls.__new__(cls)
        s._c = c
        s._hash = None
        return s

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        g = GaussianRational.coerce(x)
        return Scalar._raw({0: g} if not g.is_zero() else {})

    @property
    def coeffs(self) -> Dict[int, GaussianRational]:
        return dict(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def constant(self) -> GaussianRational:
        return self._c.get(0, ZERO_G)

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def __add__(self, other):
        o = other if isinstance(other, Scalar) else Scalar.coerce(other)
        c = dict(self._c)
        for k, v in o._c.items():
            w = c.get(k)
            if w is None:
                c[k] = v
            else:
                w = w + v
                if w.is_zero():
                    del c[k]
                else:
                    c[k] = w
        return Scalar._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            g = GaussianRational.coerce(other)
            if g.is_zero():
                return ZERO
            return Scalar._raw({k: v * g for k, v in self._c.items()})
        c: Dict[int, GaussianRational] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                w = v1 * v2
                c[k] = c[k] + w if k in c else w
        return Scalar._raw({k: v for k, v in c.items() if not v.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero Gaussian rational (or constant Scalar) only."""
        o = Scalar.coerce(other)
        if not o.is_constant() or o.is_zero():
            raise ZeroDivisionError("Scalar division only by nonzero constants")
        return self * o.constant().inverse()

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of Scalar")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar()
ONE = Scalar({0: ONE_G})
I = Scalar({0: I_G})
PI = Scalar({1: ONE_G})


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return Scalar.coerce(a) + Scalar.coerce(b)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return Scalar.coerce(a) * Scalar.coerce(b)


def scalar_eval(a: Scalar, pi_value: float) -> complex:
    if pi_value <= 0:
        raise ValueError("pi_value must be positive")
    return sum((complex(v) * pi_value ** k for k, v in Scalar.coerce(a)._c.items()), 0j)


def omega(n: int):
    """Sphere constant 2 pi^{n/2} / Gamma(n/2).

    Even n give a Scalar; n = 3 gives the opaque generator (a FormalPoly),
    which is never expanded.
    """
    if n == 2:
        return 2 * PI
    if n == 4:
        return 2 * PI * PI
    if n == 3:
        from .poly import omega_token
        return omega_token(3)
    raise ValueError("omega-unsupported")


def format_scalar(s: Scalar) -> str:
    """Canonical text such as "(-1/2)*pi + 2*pi^2" or "(2/3*i)*pi^3"."""
    if s.is_zero():
        return "0"
    parts = []
    for k in sorted(s._c):
        g = format_gaussian(s._c[k])
        if k == 0:
            parts.append(g)
            continue
        if g == "1":
            coef = ""
        elif g.isdigit():
            coef = g + "*"
        else:
            coef = f"({g})*"
        parts.append(f"{coef}pi" + (f"^{k}" if k > 1 else ""))
    return " + ".join(parts)


# ---------------------------------------------------------------- parsing

def _eval_node(node) -> Scalar:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Scalar.coerce(node.value)
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return PI
        if node.id == "i":
            return I
        raise ValueError(f"unknown symbol {node.id!r} in scalar literal")
    if isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        lhs, rhs = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            if not rhs.is_constant() or rhs.is_zero():
                raise ValueError("division by a non-constant in scalar literal")
            return lhs * _as_rational_inverse(rhs)
        if isinstance(node.op, ast.Pow):
            if not rhs.is_constant() or rhs.constant().im or rhs.constant().re.denominator != 1:
                raise ValueError("non-integer exponent in scalar literal")
            return lhs ** int(rhs.constant().re)
    raise ValueError(f"unsupported syntax in scalar literal: {ast.dump(node)}")


def _as_rational_inverse(s: Scalar) -> GaussianRational:
    return s.constant().inverse()


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`; accepts any +,-,*,/,^ expression in pi and i."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"not a scalar literal: {text!r}") from exc
    return _eval_node(tree)


def rational(p: int, q: int = 1) -> Scalar:
    return Scalar.coerce(Fraction(p, q))


def scalar_sum(items: Iterable[Scalar]) -> Scalar:
    out = ZERO
    for x in items:
        out = out + x
    return out
