"""Numeric expression trees and forward-mode automatic differentiation.

The numeric world is kept apart from the exact symbolic kernel: expression
trees admit sqrt, evaluate over floats, and differentiate by truncated
bivariate Taylor jets (TaylorScalar).  A TaylorScalar carries all partial
derivatives in (x, y) up to a chosen total order, so nested derivatives of
invariants come out of one evaluation instead of unstable finite-difference
towers.
"""

from __future__ import annotations

import math

from .kernel import QQ


class DomainError(ArithmeticError):
    """Evaluation left the real domain (reports the offending subexpression)."""

    def __init__(self, message, expr=None):
        if expr is not None:
            message = f"{message} in '{expr}'"
        super().__init__(message)
        self.expr = expr


class UnboundVariable(KeyError):
    pass


# -- expression tree -------------------------------------------------------------


class NumExpr:
    __slots__ = ()

    def eval(self, env):
        raise NotImplementedError

    def variables(self):
        out = set()
        self._collect(out)
        return out

    def _collect(self, out):
        pass

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class Const(NumExpr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = QQ(value)

    def eval(self, env):
        return float(self.value)

    def __str__(self):
        v = self.value
        if v.denominator == 1:
            return str(v.numerator) if v >= 0 else f"(-{-v.numerator})"
        s = f"{abs(v.numerator)}/{v.denominator}"
        return s if v >= 0 else f"(-{s})"


class Var(NumExpr):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def eval(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise UnboundVariable(self.name)

    def _collect(self, out):
        out.add(self.name)

    def __str__(self):
        return self.name


class _Binary(NumExpr):
    __slots__ = ("left", "right")
    op = "?"

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def _collect(self, out):
        self.left._collect(out)
        self.right._collect(out)

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


class Add(_Binary):
    __slots__ = ()
    op = "+"

    def eval(self, env):
        return self.left.eval(env) + self.right.eval(env)


class Sub(_Binary):
    __slots__ = ()
    op = "-"

    def eval(self, env):
        return self.left.eval(env) - self.right.eval(env)


class Mul(_Binary):
    __slots__ = ()
    op = "*"

    def eval(self, env):
        return self.left.eval(env) * self.right.eval(env)


class Div(_Binary):
    __slots__ = ()
    op = "/"

    def eval(self, env):
        num = self.left.eval(env)
        den = self.right.eval(env)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainError("division by zero", self)


class Pow(NumExpr):
    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        self.base = base
        self.exponent = int(exponent)

    def eval(self, env):
        b = self.base.eval(env)
        try:
            return b ** self.exponent
        except ZeroDivisionError:
            raise DomainError("zero to a negative power", self)

    def _collect(self, out):
        self.base._collect(out)

    def __str__(self):
        return f"({self.base})^{self.exponent}"


class Neg(NumExpr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def eval(self, env):
        return -self.arg.eval(env)

    def _collect(self, out):
        self.arg._collect(out)

    def __str__(self):
        return f"(-{self.arg})"


class Sqrt(NumExpr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def eval(self, env):
        v = self.arg.eval(env)
        if isinstance(v, TaylorScalar):
            return v.sqrt(self)
        if v < 0:
            raise DomainError("negative sqrt argument", self)
        return math.sqrt(v)

    def _collect(self, out):
        self.arg._collect(out)

    def __str__(self):
        return f"sqrt({self.arg})"


# -- truncated bivariate Taylor jets ------------------------------------------------


class TaylorScalar:
    """Truncated Taylor expansion in (x, y) around a basepoint.

    coeffs[(i, j)] is the coefficient of dx^i dy^j, i.e. the partial
    derivative d^{i+j} f / dx^i dy^j divided by i! j!.  All arithmetic is
    truncated at the common total order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = order
        self.coeffs = coeffs

    @staticmethod
    def const(value, order):
        if value:
            return TaylorScalar(order, {(0, 0): float(value)})
        return TaylorScalar(order, {})

    @staticmethod
    def seed(axis, value, order):
        """The coordinate function x (axis 0) or y (axis 1) at the basepoint."""
        coeffs = {(0, 0): float(value)} if value else {}
        if order >= 1:
            coeffs[(1, 0) if axis == 0 else (0, 1)] = 1.0
        return TaylorScalar(order, coeffs)

    @property
    def value(self):
        return self.coeffs.get((0, 0), 0.0)

    def derivative(self, i, j):
        """Exact partial derivative value d^{i+j}/dx^i dy^j at the basepoint."""
        if i + j > self.order:
            raise ValueError("derivative order exceeds jet order")
        c = self.coeffs.get((i, j), 0.0)
        return c * math.factorial(i) * math.factorial(j)

    def deriv_jet(self, axis):
        """The derivative along an axis, as a jet one order lower."""
        out = {}
        for (i, j), c in self.coeffs.items():
            if axis == 0 and i:
                out[(i - 1, j)] = c * i
            elif axis == 1 and j:
                out[(i, j - 1)] = c * j
        return TaylorScalar(self.order - 1, out)

    def truncated(self, order):
        if order >= self.order:
            return self
        return TaylorScalar(order, {k: c for k, c in self.coeffs.items()
                                    if k[0] + k[1] <= order})

    def _coerce(self, other):
        if isinstance(other, TaylorScalar):
            if other.order != self.order:
                o = min(self.order, other.order)
                return self.truncated(o), other.truncated(o)
            return self, other
        if isinstance(other, (int, float, type(QQ(1)))):
            return self, TaylorScalar.const(float(other), self.order)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        out = dict(a.coeffs)
        for k, c in b.coeffs.items():
            s = out.get(k, 0.0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TaylorScalar(a.order, out)

    __radd__ = __add__

    def __neg__(self):
        return TaylorScalar(self.order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        order = a.order
        out = {}
        for (i1, j1), c1 in a.coeffs.items():
            for (i2, j2), c2 in b.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j > order:
                    continue
                k = (i, j)
                s = out.get(k, 0.0) + c1 * c2
                out[k] = s
        return TaylorScalar(order, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result = TaylorScalar.const(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def reciprocal(self, expr=None):
        b0 = self.value
        if b0 == 0.0:
            raise DomainError("division by zero", expr)
        inv0 = 1.0 / b0
        out = {(0, 0): inv0}
        for d in range(1, self.order + 1):
            for i in range(d + 1):
                j = d - i
                s = 0.0
                for (p, q), c in self.coeffs.items():
                    if (p, q) == (0, 0) or p > i or q > j:
                        continue
                    s += c * out.get((i - p, j - q), 0.0)
                v = -s * inv0
                if v:
                    out[(i, j)] = v
        return TaylorScalar(self.order, out)

    def sqrt(self, expr=None):
        a0 = self.value
        if a0 < 0:
            raise DomainError("negative sqrt argument", expr)
        if a0 == 0:
            raise DomainError("sqrt jet at a branch point", expr)
        s0 = math.sqrt(a0)
        out = {(0, 0): s0}
        inv = 1.0 / (2.0 * s0)
        for d in range(1, self.order + 1):
            for i in range(d + 1):
                j = d - i
                s = 0.0
                for (p, q), c in out.items():
                    if (p, q) == (0, 0):
                        continue
                    rp, rq = i - p, j - q
                    if rp < 0 or rq < 0 or (rp, rq) == (0, 0):
                        continue
                    s += c * out.get((rp, rq), 0.0)
                v = (self.coeffs.get((i, j), 0.0) - s) * inv
                if v:
                    out[(i, j)] = v
        return TaylorScalar(self.order, out)

    def __repr__(self):
        items = ", ".join(f"{k}:{c:.6g}" for k, c in sorted(self.coeffs.items()))
        return f"TaylorScalar(order={self.order}, {{{items}}})"


def taylor_point(x, y, order):
    """Jet-space environment for evaluating expressions at (x, y)."""
    return {
        "x": TaylorScalar.seed(0, x, order),
        "y": TaylorScalar.seed(1, y, order),
    }


def eval_numeric(expr, point, derivatives=()):
    """Evaluate an expression tree at a point with forward-mode derivatives.

    ``point`` maps variable names to floats.  ``derivatives`` lists requested
    partials as (i, j) orders in (x, y); the result is (value, {order: value}).
    Only x and y are differentiated; other variables enter as constants.
    """
    need = max((i + j for (i, j) in derivatives), default=0)
    if need == 0:
        env = {k: float(v) for k, v in point.items()}
        return expr.eval(env), {}
    env = {}
    for k, v in point.items():
        if k == "x":
            env[k] = TaylorScalar.seed(0, v, need)
        elif k == "y":
            env[k] = TaylorScalar.seed(1, v, need)
        else:
            env[k] = TaylorScalar.const(v, need)
    jet = expr.eval(env)
    if not isinstance(jet, TaylorScalar):
        jet = TaylorScalar.const(jet, need)
    return jet.value, {(i, j): jet.derivative(i, j) for (i, j) in derivatives}
