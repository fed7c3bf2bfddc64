"""Formal invariant calculus over an abstract 2-dimensional coframe.

A DerivationFrame knows the structure functions of a coframe pair
(d e1 = s1 e1^e2, d e2 = s2 e1^e2) and a table of derivation rules: for
each invariant symbol, its two components in d f = D1(f) e1 + D2(f) e2.
Everything downstream of the structure equations is mechanical from here:
chain-rule derivations of rational expressions in the invariants, and the
integrability operator whose vanishing expresses d(df) = 0.

Two subscript conventions coexist in the calculus:
  * "plain":  df = f1 e1 + f2 e2 (used in the reduced two-pencils frame);
  * "dual":   df = f2 e1 - f1 e2 (used with the web coframes U1, U2).
The frame stores plain components; dual-convention helpers translate.
"""

from __future__ import annotations

from .rational import RatExpr, solve_linear
from .poly import PolynomialError


class FrameError(ValueError):
    pass


def dual_to_plain(pair):
    """(f1, f2) in the dual convention -> plain components (A, B)."""
    f1, f2 = pair
    return (f2, -f1)


def plain_to_dual(pair):
    A, B = pair
    return (-B, A)


class DerivationFrame:
    def __init__(self, s1, s2, rules=None):
        self.s1 = s1 if isinstance(s1, RatExpr) else RatExpr.const(s1)
        self.s2 = s2 if isinstance(s2, RatExpr) else RatExpr.const(s2)
        self.rules = dict(rules or {})

    def copy(self):
        return DerivationFrame(self.s1, self.s2, self.rules)

    def set_rule(self, name, d1, d2):
        self.rules[name] = (_as_rat(d1), _as_rat(d2))

    def set_rule_dual(self, name, f1, f2):
        self.rules[name] = dual_to_plain((_as_rat(f1), _as_rat(f2)))

    def rule(self, name):
        try:
            return self.rules[name]
        except KeyError:
            raise FrameError(f"no derivation rule for {name!r}")

    def _chain(self, expr, idx):
        out = RatExpr.zero()
        for v in expr.variables:
            d = expr.diff(v)
            if d.is_zero:
                continue
            out = out + d * self.rule(v)[idx]
        return out

    def d1(self, expr):
        return self._chain(_as_rat(expr), 0)

    def d2(self, expr):
        return self._chain(_as_rat(expr), 1)

    def d_pair(self, expr):
        expr = _as_rat(expr)
        return (self._chain(expr, 0), self._chain(expr, 1))

    def dual_d1(self, expr):
        return -self.d2(expr)

    def dual_d2(self, expr):
        return self.d1(expr)

    def compat(self, name_or_pair):
        """Coefficient of e1^e2 in d(df); zero iff the rules close on f.

        For df = A e1 + B e2 the operator is D1(B) - D2(A) + s1 A + s2 B.
        """
        if isinstance(name_or_pair, str):
            A, B = self.rule(name_or_pair)
        else:
            A, B = name_or_pair
        return (self.d1(B) - self.d2(A)
                + self.s1 * _as_rat(A) + self.s2 * _as_rat(B))

    def solve_compat(self, name_or_pair, unknown):
        """Close d(df) = 0 by solving for a single linear unknown."""
        eq = self.compat(name_or_pair)
        return solve_linear(eq, unknown)

    def check_zero(self, expr, what=""):
        expr = _as_rat(expr)
        if not expr.is_zero:
            raise FrameError(f"residual does not vanish: {what}")
        return True


def _as_rat(x):
    if isinstance(x, RatExpr):
        return x
    return RatExpr.const(x)


def isolate(eq, unknown):
    """Solve a rational equation linear in one variable (error otherwise)."""
    try:
        return solve_linear(eq, unknown)
    except PolynomialError as exc:
        raise FrameError(str(exc))
