"""Loader for the bundled table of reference values.

Term classes are written in a small index-sum language, for example::

    {"sum": {"beta": "1..n", "i": "1..n-1"},
     "expr": "A(beta,i)*DA(i,beta,n)",
     "coefficient": "(-1/8)*pi + (1/3)*pi^2"}

``expr`` may use ``A(b,p)``, ``DA(i,b,p)``, ``HP``, integer literals,
``+ - *`` and ``^``/``**`` with integer exponents.  Ranges are
``lo..hi`` where each end is an integer expression in ``n``.
"""

from __future__ import annotations

import ast
import itertools
import json
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from .poly import FormalPoly, poly_sum, symmetrize_A
from .scalar import Scalar, parse_scalar


def load_expected(path: Optional[str] = None) -> Dict:
    if path is None:
        text = resources.files("twisted_residue").joinpath("data/expected_values.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    table = json.loads(text)
    ids = [e["check_id"] for e in table["entries"]]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate check_id in expected-values table")
    return table


def entries_by_id(table: Mapping) -> Dict[str, Dict]:
    return {e["check_id"]: e for e in table["entries"]}


def _int_expr(text: str, n: int) -> int:
    node = ast.parse(text, mode="eval").body

    def ev(x):
        if isinstance(x, ast.Constant) and isinstance(x.value, int):
            return x.value
        if isinstance(x, ast.Name) and x.id == "n":
            return n
        if isinstance(x, ast.BinOp) and isinstance(x.op, (ast.Add, ast.Sub)):
            a, b = ev(x.left), ev(x.right)
            return a + b if isinstance(x.op, ast.Add) else a - b
        raise ValueError(f"bad range bound {text!r}")
    return ev(node)


def _range(spec: str, n: int) -> range:
    lo, hi = spec.split("..")
    return range(_int_expr(lo, n), _int_expr(hi, n) + 1)


class _ClassEvaluator:
    def __init__(self, n: int, env: Mapping[str, int]):
        self.n = n
        self.env = dict(env, n=n)

    def index(self, node) -> int:
        if isinstance(node, ast.Name):
            return self.env[node.id]
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        raise ValueError("indices must be names or integers")

    def ev(self, node) -> FormalPoly:
        n = self.n
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return FormalPoly.const(node.value, n)
        if isinstance(node, ast.Name):
            if node.id == "HP":
                return FormalPoly.gen(("HP",), n)
            raise ValueError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            args = [self.index(a) for a in node.args]
            if node.func.id == "A" and len(args) == 2:
                return FormalPoly.gen(("A", min(args), max(args)), n)
            if node.func.id == "DA" and len(args) == 3:
                return FormalPoly.gen(("DA", *args), n)
            raise ValueError(f"unknown function {node.func.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -self.ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return self.ev(node.left) ** self.index(node.right)
            a, b = self.ev(node.left), self.ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise ValueError("unsupported expression")


def class_poly(spec: Mapping, n: int) -> FormalPoly:
    """Expand one summed term class into a FormalPoly (coefficient not applied)."""
    tree = ast.parse(spec["expr"].replace("^", "**"), mode="eval").body
    names = list(spec.get("sum", {}))
    ranges = [_range(spec["sum"][k], n) for k in names]
    out = []
    for values in itertools.product(*ranges):
        out.append(_ClassEvaluator(n, dict(zip(names, values))).ev(tree))
    return poly_sum(out, n)


def classes_poly(classes: List[Mapping], n: int) -> FormalPoly:
    """sum_c coefficient_c * class_c (still per unit of tr[id] and sphere constant)."""
    return poly_sum((class_poly(c, n).scale(parse_scalar(c["coefficient"])) for c in classes), n)


def case_expected(entry: Mapping, table: Mapping, n: int) -> FormalPoly:
    if "negate_of" in entry:
        return -case_expected(entries_by_id(table)[entry["negate_of"]], table, n)
    return classes_poly(entry["classes"], n)


def canonical_form(p: FormalPoly) -> FormalPoly:
    """Symmetrize A and DA in their (b, p) slots so equal structures compare equal."""
    table = {}
    for g in p.generators():
        if g[0] == "DA" and g[2] > g[3]:
            table[g] = FormalPoly.gen(("DA", g[1], g[3], g[2]), p.n)
    return symmetrize_A(p.substitute(table) if table else p)


def scalar_literal(s: Scalar) -> str:
    from .scalar import format_scalar
    return format_scalar(s)
