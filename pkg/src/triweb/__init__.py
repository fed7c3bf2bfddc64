"""triweb: projective differential invariants of planar linear 3-webs.

Exact-arithmetic symbolic kernel (multivariate polynomials, rational
functions, resultants, Groebner bases), jet calculus for straight-line
direction fields, web invariants and structure-equation verification,
Cartan-connection flatness tests, signature sets, and the staged
elimination pipelines for webs with two line pencils.
"""

__version__ = "0.1.0"

from .kernel import backend_name, rational_backend_name
from .poly import Poly, gcd, lcm, resultant, squarefree, trial_divide
from .rational import RatExpr, ratvars, solve_linear
from .parser import parse, parse_numeric, parse_symbolic, ParseError

__all__ = [
    "Poly",
    "RatExpr",
    "ParseError",
    "backend_name",
    "gcd",
    "lcm",
    "parse",
    "parse_numeric",
    "parse_symbolic",
    "ratvars",
    "rational_backend_name",
    "resultant",
    "solve_linear",
    "squarefree",
    "trial_divide",
]
