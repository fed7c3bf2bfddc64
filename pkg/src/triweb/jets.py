"""Calculus on the jet alphabet of straight-line direction fields.

A direction field B(x, y) of a rectilinear foliation obeys B_x + B*B_y = 0,
so every x-derivative is expressible through y-derivatives.  The alphabet
therefore holds only x, y and the y-derivative towers P, P_y, P_yy, ...,
Q, ..., R, ...; the total derivative in x is an operator, not a variable.

reduce_modulo rewrites an expression to normal form under a list of derived
identities, each solved for its highest jet variable; differentiated
consequences of an identity are substituted as well, so the head tower is
eliminated completely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .rational import RatExpr, solve_linear
from .parser import parse_symbolic

BASES = ("P", "Q", "R")


class JetError(ValueError):
    pass


def jet_name(base, order):
    if order == 0:
        return base
    return f"{base}_{'y' * order}"


def split_jet_name(name):
    """(base, order) for a jet variable, else None."""
    if name in BASES:
        return name, 0
    head, _, tail = name.partition("_")
    if head in BASES and tail and set(tail) == {"y"}:
        return head, len(tail)
    return None


def jet_var(base, order):
    return RatExpr.var(jet_name(base, order))


def jet_order(expr):
    """Highest derivative order per base appearing in the expression."""
    orders = {}
    for v in expr.variables:
        parsed = split_jet_name(v)
        if parsed:
            base, k = parsed
            orders[base] = max(orders.get(base, 0), k)
    return orders


def total_dy(expr):
    """Vertical total derivative: y moves, B_y^k -> B_y^(k+1)."""
    out = expr.diff("y")
    for v in expr.variables:
        parsed = split_jet_name(v)
        if parsed is None:
            continue
        base, k = parsed
        d = expr.diff(v)
        if not d.is_zero:
            out = out + d * jet_var(base, k + 1)
    return out


@lru_cache(maxsize=None)
def _dx_of_jet(base, order):
    # D_x(B) = -B*B_y; higher orders by commuting with D_y
    if order == 0:
        return -(jet_var(base, 0) * jet_var(base, 1))
    return total_dy(_dx_of_jet(base, order - 1))


def total_dx(expr):
    """Total derivative in x with the rectilinearity reduction built in."""
    out = expr.diff("x")
    for v in expr.variables:
        parsed = split_jet_name(v)
        if parsed is None:
            continue
        base, k = parsed
        d = expr.diff(v)
        if not d.is_zero:
            out = out + d * _dx_of_jet(base, k)
    return out


@dataclass(frozen=True)
class DerivedIdentity:
    """A solved relation head == rhs together with its derivation trail."""

    name: str
    lhs: RatExpr
    rhs: RatExpr
    provenance: tuple = ()

    def head(self):
        vs = self.lhs.variables
        if not (self.lhs.is_poly and len(vs) == 1 and
                self.lhs == RatExpr.var(vs[0])):
            raise JetError(f"identity {self.name} is not solved for a variable")
        return vs[0]

    def as_dict(self):
        return {
            "name": self.name,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "provenance": list(self.provenance),
        }


def transcript_json(identities):
    return json.dumps([i.as_dict() for i in identities], indent=2)


def transcript_from_json(text):
    out = []
    for row in json.loads(text):
        out.append(DerivedIdentity(
            name=row["name"],
            lhs=parse_symbolic(row["lhs"]),
            rhs=parse_symbolic(row["rhs"]),
            provenance=tuple(row["provenance"]),
        ))
    return out


def reduce_modulo(expr, identities, max_rounds=400):
    """Normal form of expr under solved identities (and their D_y shifts).

    Each identity eliminates its head variable and the whole derivative tower
    above it.  The highest-order offender is substituted first; termination
    follows because every substitution strictly lowers the tower it touches.
    """
    heads = {}
    for ident in identities:
        parsed = split_jet_name(ident.head())
        if parsed is None:
            raise JetError(f"identity {ident.name} must solve a jet variable")
        base, k = parsed
        if base in heads and heads[base][0] != k:
            lower = min(heads[base][0], k)
            which = ident if k == lower else heads[base][1]
            parsed_low = (lower, which)
            heads[base] = parsed_low
        else:
            heads[base] = (k, ident)

    @lru_cache(maxsize=None)
    def shifted_rhs(base, order):
        k0, ident = heads[base]
        rhs = ident.rhs
        for _ in range(order - k0):
            rhs = total_dy(rhs)
        return rhs

    for _ in range(max_rounds):
        offenders = []
        for v in expr.variables:
            parsed = split_jet_name(v)
            if parsed is None:
                continue
            base, k = parsed
            if base in heads and k >= heads[base][0]:
                offenders.append((k, v, base))
        if not offenders:
            return expr
        offenders.sort(reverse=True)
        k, v, base = offenders[0]
        expr = expr.subs({v: shifted_rhs(base, k)})
    raise JetError("substitution did not reach a fixpoint (cyclic identities?)")


def alignment_pipeline():
    """Derivation chain behind the aligned-focal-points rigidity statement.

    Starting from the collinearity constraint of the three focal points, the
    chain eliminates R_y, forces Q_yy = P_yy, pins P_yyy, and finally kills
    P_yy altogether.  Returns the four identities in derivation order; every
    residual is checked to vanish along the way.
    """
    P, Q, R = (jet_var(b, 0) for b in BASES)
    P_y, Q_y, R_y = (jet_var(b, 1) for b in BASES)
    P_yy, Q_yy = jet_var("P", 2), jet_var("Q", 2)

    delta = P_y * (Q - R) + Q_y * (R - P) + R_y * (P - Q)
    id1 = DerivedIdentity("R_y", R_y, solve_linear(delta, "R_y"))

    # R_xy two ways: through the Euler reduction, and through D_x of the
    # solved R_y; their gap is linear in Q_yy
    euler_path = reduce_modulo(total_dy(-(R * R_y)), [id1])
    direct_path = reduce_modulo(total_dx(id1.rhs), [id1])
    gap = euler_path - direct_path
    id2 = DerivedIdentity("Q_yy", Q_yy, solve_linear(gap, "Q_yy"),
                          provenance=("R_y",))
    if id2.rhs != P_yy:
        raise JetError("mixed-derivative comparison did not give Q_yy = P_yy")

    # differentiate Q_yy = P_yy along x and reduce: linear in P_yyy
    gap3 = reduce_modulo(total_dx(Q_yy - P_yy), [id1, id2])
    id3 = DerivedIdentity("P_yyy", jet_var("P", 3),
                          solve_linear(gap3, "P_yyy"),
                          provenance=("R_y", "Q_yy"))

    # one more x-derivative: the residual collapses to const * P_yy^2,
    # so the second derivative must vanish
    gap4 = reduce_modulo(total_dx(jet_var("P", 3) - id3.rhs), [id1, id2, id3])
    cofactor = gap4.num
    mult = 0
    while True:
        quotient = cofactor.exact_div(P_yy.num.embed(cofactor.vars)
                                      if "P_yy" in cofactor.vars else P_yy.num)
        if quotient is None:
            break
        cofactor = quotient
        mult += 1
    if mult < 1 or not cofactor.trim().is_const or cofactor.is_zero:
        raise JetError("final elimination did not isolate P_yy")
    id4 = DerivedIdentity("P_yy", P_yy, RatExpr.zero(),
                          provenance=("R_y", "Q_yy", "P_yyy"))

    chain = [id1, id2, id3, id4]
    context = []
    for ident in chain:
        residual = reduce_modulo(ident.lhs - ident.rhs, context + [ident])
        if not residual.is_zero:
            raise JetError(f"identity {ident.name} does not close")
        context.append(ident)
    return chain
