"""Exact boundary and interior residue computations for the J-twisted Dirac operator."""

__version__ = "0.1.0"

from .scalar import Scalar, GaussianRational, parse_scalar, format_scalar, scalar_eval, omega
from .poly import FormalPoly, substitute_J_relations
from .clifford import CliffordElem, cl_mul, cl_trace, abstract_trace, tr_id
from .xi import RatXi, pi_plus, pi_prime, integrate_line, sphere_moment, sphere_integrate
from .symbols import symbol_DJ, parametrix, compose_symbols, boundary_evaluate

__all__ = [
    "Scalar", "GaussianRational", "parse_scalar", "format_scalar", "scalar_eval", "omega",
    "FormalPoly", "substitute_J_relations",
    "CliffordElem", "cl_mul", "cl_trace", "abstract_trace", "tr_id",
    "RatXi", "pi_plus", "pi_prime", "integrate_line", "sphere_moment", "sphere_integrate",
    "symbol_DJ", "parametrix", "compose_symbols", "boundary_evaluate",
]
