"""Backend selection for the polynomial term kernel and the rational scalars.

The hot term arithmetic has two interchangeable implementations: a compiled
Cython extension (triweb._termops_c) and a pure-Python fallback
(triweb._termops_py).  The compiled one is used when it imported cleanly,
unless the environment variable TRIWEB_PURE=1 forces the fallback.

Rational coefficients use gmpy2.mpq when gmpy2 is installed and
fractions.Fraction otherwise (TRIWEB_FRACTION=1 forces Fraction).  Both obey
the same arithmetic protocol, expose .numerator/.denominator and print as
"p/q", so everything downstream is agnostic.
"""

import os

if os.environ.get("TRIWEB_PURE") == "1":
    from . import _termops_py as termops
else:
    try:
        from . import _termops_c as termops  # type: ignore[attr-defined]
    except ImportError:
        from . import _termops_py as termops

if os.environ.get("TRIWEB_FRACTION") == "1":
    from fractions import Fraction as QQ
else:
    try:
        from gmpy2 import mpq as QQ  # type: ignore[assignment]
    except ImportError:
        from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def backend_name() -> str:
    """Name of the active term-arithmetic backend ("compiled" or "python")."""
    return termops.BACKEND


def rational_backend_name() -> str:
    return "gmpy2" if QQ.__module__.startswith("gmpy2") else "fractions"
