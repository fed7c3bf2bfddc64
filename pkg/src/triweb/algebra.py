"""Quadratic extension scalars: a + b*sqrt(r) over the rational-function field.

Square roots never appear as radicals in the symbolic world; they live in
the extension defined by the rewrite s^2 -> r.  Division rationalizes by
the conjugate, and derivations lift through d(s) = d(r) * s / (2 r).
"""

from __future__ import annotations

from .rational import RatExpr


class SqrtExt:
    __slots__ = ("a", "b", "r")

    def __init__(self, a, b, r):
        if not isinstance(a, RatExpr):
            a = RatExpr.const(a)
        if not isinstance(b, RatExpr):
            b = RatExpr.const(b)
        self.a = a
        self.b = b
        self.r = r

    @staticmethod
    def of(value, r):
        if isinstance(value, SqrtExt):
            return value
        return SqrtExt(value if isinstance(value, RatExpr)
                       else RatExpr.const(value), RatExpr.zero(), r)

    @staticmethod
    def root(r):
        """sqrt(r) itself."""
        return SqrtExt(RatExpr.zero(), RatExpr.one(), r)

    @property
    def is_zero(self):
        return self.a.is_zero and self.b.is_zero

    def __bool__(self):
        return not self.is_zero

    _LIFTABLE = (RatExpr, int)

    def _lift(self, other):
        if isinstance(other, SqrtExt):
            if other.r != self.r:
                raise ValueError("mixed radicands")
            return other
        if isinstance(other, self._LIFTABLE) or _is_rational(other):
            return SqrtExt.of(other, self.r)
        return None

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __neg__(self):
        return SqrtExt(-self.a, -self.b, self.r)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return SqrtExt(self.a + other.a, self.b + other.b, self.r)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return SqrtExt(self.a - other.a, self.b - other.b, self.r)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return SqrtExt(self.a * other.a + self.b * other.b * self.r,
                       self.a * other.b + self.b * other.a, self.r)

    __rmul__ = __mul__

    def conjugate(self):
        return SqrtExt(self.a, -self.b, self.r)

    def norm(self):
        """Field norm a^2 - b^2 r (a RatExpr)."""
        return self.a * self.a - self.b * self.b * self.r

    def inverse(self):
        n = self.norm()
        if n.is_zero:
            raise ZeroDivisionError("non-invertible extension element")
        return SqrtExt(self.a / n, -self.b / n, self.r)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = SqrtExt.of(1, self.r)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __repr__(self):
        return f"({self.a}) + ({self.b})*sqrt({self.r})"


def _is_rational(value):
    return type(value).__name__ in ("mpq", "Fraction")


def lift_derivation(D, r):
    """Turn a derivation of the base field into one of the extension."""
    def lifted(z):
        if not isinstance(z, SqrtExt):
            return SqrtExt.of(D(z), r)
        da = D(z.a)
        db = D(z.b)
        dr = D(z.r)
        # d(b*s) = db*s + b*dr*s/(2r)
        return SqrtExt(da, db + z.b * dr / (2 * z.r), r)
    return lifted
