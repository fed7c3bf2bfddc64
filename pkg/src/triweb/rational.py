"""Exact rational functions (quotients of multivariate polynomials).

RatExpr is kept in a unique canonical form: numerator and denominator are
coprime, the denominator is monic under grevlex, variable tuples are sorted
and trimmed to the variables that actually occur.  Structural equality
therefore decides mathematical equality.
"""

from __future__ import annotations

from .kernel import QQ, QQ1
from .poly import Poly, PolynomialError, gcd


class RatExpr:
    """An exact rational function in named variables."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Poly.const(1)
        if not isinstance(num, Poly) or not isinstance(den, Poly):
            raise PolynomialError("RatExpr needs Poly parts")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        num, den = num._align(den)
        if num.is_zero:
            self.num = Poly.zero()
            self.den = Poly.const(1)
            return
        if den.is_const:
            num = num.scaled(QQ1 / den.const_value())
            den = Poly.const(1, num.vars)
        else:
            g = gcd(num, den)
            if not g.is_const:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lead_coeff()
            if lc != 1:
                inv = QQ1 / lc
                num = num.scaled(inv)
                den = den.scaled(inv)
        num = num.trim()
        den = den.trim()
        merged = tuple(sorted(set(num.vars) | set(den.vars)))
        self.num = num.embed(merged)
        self.den = den.embed(merged)

    # -- construction --------------------------------------------------------

    @staticmethod
    def const(c):
        return RatExpr(Poly.const(c))

    @staticmethod
    def zero():
        return RatExpr(Poly.zero())

    @staticmethod
    def one():
        return RatExpr(Poly.const(1))

    @staticmethod
    def var(name):
        return RatExpr(Poly.variable(name))

    @staticmethod
    def from_poly(p):
        return RatExpr(p)

    @classmethod
    def _raw(cls, num, den):
        """Trusted: parts already canonical and aligned."""
        out = object.__new__(cls)
        out.num = num
        out.den = den
        return out

    # -- queries ---------------------------------------------------------------

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_const(self):
        return self.num.is_const and self.den.is_const

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    @property
    def is_poly(self):
        return self.den.is_const

    @property
    def variables(self):
        return self.num.vars

    def __bool__(self):
        return not self.num.is_zero

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic --------------------------------------------------------------

    def __neg__(self):
        return RatExpr._raw(-self.num, self.den)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_const and d.is_const:
            return RatExpr(a + c)
        g = gcd(b, d)
        if g.is_const:
            return RatExpr._normalized(a * d + c * b, b * d)
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        t = a * d1 + c * b1
        g2 = gcd(t, g)
        if g2.is_const:
            return RatExpr._normalized(t, b1 * d)
        return RatExpr._normalized(t.exact_div(g2), b1 * d.exact_div(g2))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero or c.is_zero:
            return RatExpr.zero()
        g1 = gcd(a, d)
        if not g1.is_const:
            a = a.exact_div(g1)
            d = d.exact_div(g1)
        g2 = gcd(c, b)
        if not g2.is_const:
            c = c.exact_div(g2)
            b = b.exact_div(g2)
        return RatExpr._normalized(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero expression")
        return self.__mul__(RatExpr._raw(other.den, other.num)._renormal())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise PolynomialError("rational powers need integer exponents")
        if n == 0:
            return RatExpr.one()
        if n < 0:
            if self.num.is_zero:
                raise ZeroDivisionError("zero to a negative power")
            base = RatExpr(self.den, self.num)
            n = -n
        else:
            base = self
        return RatExpr._normalized(base.num ** n, base.den ** n)

    @classmethod
    def _normalized(cls, num, den):
        """Parts known coprime up to a constant: only rescale and trim."""
        if num.is_zero:
            return cls.zero()
        num, den = num._align(den)
        if den.is_const:
            num = num.scaled(QQ1 / den.const_value())
            den = Poly.const(1, num.vars)
        else:
            lc = den.lead_coeff()
            if lc != 1:
                inv = QQ1 / lc
                num = num.scaled(inv)
                den = den.scaled(inv)
        num = num.trim()
        den = den.trim()
        merged = tuple(sorted(set(num.vars) | set(den.vars)))
        return cls._raw(num.embed(merged), den.embed(merged))

    def _renormal(self):
        """Fix monic/trim invariants after a num/den swap."""
        return RatExpr._normalized(self.num, self.den)

    # -- calculus ------------------------------------------------------------------

    def diff(self, var):
        """Partial derivative; zero for variables not present."""
        n, d = self.num, self.den
        if d.is_const:
            return RatExpr(n.diff(var), d)
        return RatExpr(n.diff(var) * d - n * d.diff(var), d * d)

    def subs(self, mapping):
        """Substitute variables by RatExpr values; unmapped ones persist."""
        conv = {}
        for k, v in mapping.items():
            conv[k] = v if isinstance(v, RatExpr) else RatExpr.const(v)
        num = _subs_poly(self.num, conv)
        den = _subs_poly(self.den, conv)
        if den.is_zero:
            raise ZeroDivisionError("substitution made the denominator vanish")
        return num / den

    def eval(self, values, convert=None):
        """Evaluate with all variables bound; raises on a zero denominator."""
        dv = self.den.eval(values, convert)
        if not dv:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.eval(values, convert) / dv

    def as_numer_denom(self):
        return self.num, self.den

    # -- printing ---------------------------------------------------------------------

    def __str__(self):
        if self.den.is_const and self.den.const_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatExpr({self})"


def _coerce(value):
    if isinstance(value, RatExpr):
        return value
    if isinstance(value, (int, type(QQ1))):
        return RatExpr.const(value)
    if isinstance(value, Poly):
        return RatExpr(value)
    return NotImplemented


def _subs_poly(p, mapping):
    out = RatExpr.zero()
    for exp, c in p.terms.items():
        term = RatExpr.const(c)
        for v, e in zip(p.vars, exp):
            if not e:
                continue
            repl = mapping.get(v)
            if repl is None:
                repl = RatExpr.var(v)
            term = term * repl ** e
        out = out + term
    return out


def ratvars(names):
    """Convenience: "x y z" -> (RatExpr x, RatExpr y, RatExpr z)."""
    return tuple(RatExpr.var(n) for n in names.split())


def _poly_source(p):
    if not p.terms:
        return "0.0"
    parts = []
    for exp, c in p.terms.items():
        factors = [repr(float(c))]
        for v, e in zip(p.vars, exp):
            if e == 1:
                factors.append(v)
            elif e:
                factors.append(f"{v}**{e}")
        parts.append("*".join(factors))
    return "(" + " + ".join(parts) + ")"


def compile_float(expr, varnames):
    """Compile a RatExpr into a fast float-valued Python function.

    Used in numeric inner loops (path integration) where the generic
    evaluator's term-by-term dispatch dominates the cost.
    """
    num = _poly_source(expr.num)
    if expr.den.is_const and expr.den.const_value() == 1:
        src = num
    else:
        src = f"{num} / {_poly_source(expr.den)}"
    args = ", ".join(varnames)
    code = compile(f"lambda {args}: {src}", "<ratexpr>", "eval")
    return eval(code, {"__builtins__": {}})


def solve_linear(expr, var):
    """Solve expr == 0 for a variable in which its numerator is linear."""
    num = expr.num
    cof = num.coeffs_in(var)
    deg = max(cof) if cof else 0
    if deg > 1:
        raise PolynomialError(f"expression is not linear in {var!r}")
    if 1 not in cof or cof[1].is_zero:
        raise PolynomialError(f"variable {var!r} does not occur linearly")
    c0 = cof.get(0, Poly.zero(num.vars))
    return RatExpr(-c0, cof[1])
