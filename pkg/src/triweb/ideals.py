"""Polynomial ideals over the rationals: Buchberger bases and dimension.

Buchberger runs with the sugar selection strategy and both classical
pair-elimination criteria; reduced bases are unique for a fixed monomial
order, so ideal equality is basis equality.  The Krull dimension of the
quotient comes from the combinatorics of leading terms: the size of a
largest variable subset meeting the support of no leading monomial.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field

from .kernel import QQ1, termops
from .poly import Poly, PolynomialError
from .parser import parse_symbolic


class ResourceCeiling(RuntimeError):
    pass


@dataclass
class PolyIdeal:
    generators: list
    vars: tuple

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if isinstance(g, str):
                e = parse_symbolic(g)
                if not e.is_poly:
                    raise PolynomialError(f"not a polynomial: {g}")
                g = e.num
            if g.is_zero:
                continue
            gens.append(g.embed(self.vars) if g.vars != self.vars else g)
        self.generators = gens

    @staticmethod
    def of(gens, vars=None):
        polys = []
        for g in gens:
            if isinstance(g, str):
                e = parse_symbolic(g)
                if not e.is_poly:
                    raise PolynomialError(f"not a polynomial: {g}")
                polys.append(e.num)
            else:
                polys.append(g)
        if vars is None:
            names = set()
            for p in polys:
                names.update(p.used_vars())
            vars = tuple(sorted(names))
        return PolyIdeal([p.embed(tuple(sorted(set(p.vars) | set(vars))))
                          if set(p.vars) - set(vars) else p.embed(vars)
                          for p in polys], tuple(vars))

    def to_json(self):
        return json.dumps({"variables": list(self.vars),
                           "generators": [str(g) for g in self.generators]},
                          indent=2)

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        return PolyIdeal(data["generators"], tuple(data["variables"]))


def _spoly_data(f):
    lt = termops.lead_exponent(f)
    return lt, f[lt]


def groebner(ideal, ceiling_seconds=None, ceiling_basis=2000):
    """Reduced Groebner basis (grevlex) by Buchberger with sugar selection.

    Returns monic generators sorted by leading monomial.  Membership of
    every input generator is rechecked by reduction to zero.
    """
    gens = [g for g in ideal.generators if not g.is_zero]
    if not gens:
        return []
    basis = []
    sugars = []
    # interreduce the input first; repeated passes until stable
    work = [g.terms for g in gens]
    changed = True
    while changed:
        changed = False
        nxt = []
        for idx, t in enumerate(work):
            others = nxt + work[idx + 1:]
            r = termops.normal_form(t, others) if others else t
            if r != t:
                changed = True
            if r:
                nxt.append(r)
        work = nxt
    for t in work:
        lt = termops.lead_exponent(t)
        basis.append(termops.scale_terms(t, QQ1 / t[lt]))
        sugars.append(sum(lt))

    def lcm_exp(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    def divides(a, b):
        return all(x <= y for x, y in zip(a, b))

    pairs = {}
    completed = set()

    def add_pairs(j):
        ltj = termops.lead_exponent(basis[j])
        for i in range(j):
            lti = termops.lead_exponent(basis[i])
            l = lcm_exp(lti, ltj)
            sugar = max(sugars[i] + sum(l) - sum(lti),
                        sugars[j] + sum(l) - sum(ltj))
            pairs[(i, j)] = (sugar, sum(l), l)

    for j in range(len(basis)):
        add_pairs(j)

    t0 = time.time()
    while pairs:
        if ceiling_seconds is not None and time.time() - t0 > ceiling_seconds:
            raise ResourceCeiling("groebner time ceiling exceeded")
        if len(basis) > ceiling_basis:
            raise ResourceCeiling("groebner basis size ceiling exceeded")
        key = min(pairs, key=lambda k: pairs[k][:2])
        sugar, _, l = pairs.pop(key)
        i, j = key
        lti = termops.lead_exponent(basis[i])
        ltj = termops.lead_exponent(basis[j])
        # coprime leads never yield new information
        if all(a + b == c for a, b, c in zip(lti, ltj, l)):
            completed.add(key)
            continue
        # chain criterion: S(i,j) is redundant once S(i,k) and S(k,j)
        # have both reduced to zero for some k with LT(k) | lcm(i, j)
        redundant = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if not divides(termops.lead_exponent(basis[k]), l):
                continue
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 in completed and p2 in completed:
                redundant = True
                break
        if redundant:
            completed.add(key)
            continue
        fi, fj = basis[i], basis[j]
        mi = tuple(a - b for a, b in zip(l, lti))
        mj = tuple(a - b for a, b in zip(l, ltj))
        s = termops.sub_terms(termops.mul_monomial(fi, mi, QQ1),
                              termops.mul_monomial(fj, mj, QQ1))
        r = termops.normal_form(s, basis)
        completed.add(key)
        if not r:
            continue
        ltr = termops.lead_exponent(r)
        r = termops.scale_terms(r, QQ1 / r[ltr])
        # an immediate unit ends the computation
        if not any(ltr):
            return [Poly({(0,) * len(ideal.vars): QQ1}, ideal.vars)]
        basis.append(r)
        sugars.append(sugar)
        add_pairs(len(basis) - 1)

    final = list(basis)
    # inter-reduce to the unique reduced basis
    reduced = []
    for idx, b in enumerate(final):
        others = [c for k, c in enumerate(final) if k != idx]
        r = termops.normal_form(b, others) if others else b
        if r:
            lt = termops.lead_exponent(r)
            reduced.append(termops.scale_terms(r, QQ1 / r[lt]))
    reduced.sort(key=lambda t: termops.grevlex_key(termops.lead_exponent(t)),
                 reverse=True)
    out = [Poly(t, ideal.vars) for t in reduced]
    for g in ideal.generators:
        if termops.normal_form(g.terms, [b.terms for b in out]):
            raise PolynomialError("generator does not reduce to zero "
                                  "modulo the computed basis (kernel bug)")
    return out


def is_unit_ideal(basis):
    return len(basis) == 1 and basis[0].is_const


def dimension(ideal, basis=None, **kw):
    """Krull dimension of the quotient ring; -1 for the unit ideal.

    Size of a maximal subset of variables independent modulo the leading
    term ideal (no leading monomial supported inside the subset).
    """
    basis = groebner(ideal, **kw) if basis is None else basis
    if not basis:
        return len(ideal.vars)
    if is_unit_ideal(basis):
        return -1
    supports = []
    for b in basis:
        lt = b.lead_exponent()
        supports.append(frozenset(i for i, e in enumerate(lt) if e))
    n = len(ideal.vars)
    best = 0
    for size in range(n, 0, -1):
        if size <= best:
            break
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                best = size
                break
        if best == size:
            break
    return best


@dataclass
class ChainReport:
    dimensions: list
    stabilized_at: object
    verdict: str
    ideals: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self):
        return json.dumps({
            "dimensions": self.dimensions,
            "stabilized_at": self.stabilized_at,
            "verdict": self.verdict,
            "notes": self.notes,
            "ideals": [i.to_json() for i in self.ideals],
        }, indent=2)
