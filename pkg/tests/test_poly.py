"""Polynomial layer: gcd, square-free decomposition, resultants, division."""

import random

import pytest

from triweb import Poly, gcd, lcm, resultant, squarefree, trial_divide
from triweb.kernel import QQ
from triweb.parser import parse_symbolic
from triweb.poly import PolynomialError


def P(text):
    e = parse_symbolic(text)
    assert e.is_poly, text
    return e.num


def random_poly(rng, names, nterms=4, maxdeg=3):
    out = Poly.zero(tuple(sorted(names)))
    for _ in range(nterms):
        term = Poly.const(QQ(rng.randrange(-6, 7), rng.randrange(1, 5)),
                          tuple(sorted(names)))
        for n in names:
            term = term * Poly.variable(n) ** rng.randrange(maxdeg)
        out = out + term
    return out


class TestArithmetic:
    def test_ring_identities(self):
        rng = random.Random(1)
        for _ in range(25):
            a = random_poly(rng, ["x", "y"])
            b = random_poly(rng, ["x", "y"])
            c = random_poly(rng, ["x", "y"])
            assert a * (b + c) == a * b + a * c
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a

    def test_divmod_roundtrip(self):
        rng = random.Random(2)
        for _ in range(25):
            a = random_poly(rng, ["x", "y"], nterms=6)
            b = random_poly(rng, ["x", "y"], nterms=3)
            if b.is_zero:
                continue
            q, r = a.divmod(b)
            assert q * b + r == a

    def test_power(self):
        x = Poly.variable("x")
        assert x ** 0 == Poly.const(1, ("x",))
        assert (x + 1) ** 3 == P("x^3+3*x^2+3*x+1")

    def test_mixed_variable_universes(self):
        assert P("x") + P("y") == P("x+y")
        assert (P("x*z") * P("y")).vars == ("x", "y", "z")


class TestGcd:
    def test_known_gcds(self):
        assert gcd(P("x^2-1"), P("x^2+2*x+1")) == P("x+1")
        assert gcd(P("x^2+1"), P("x-2")) == P("1")
        assert gcd(P("0"), P("3*x")) == P("x")

    def test_random_products(self):
        rng = random.Random(3)
        for _ in range(20):
            g = random_poly(rng, ["x", "y"], nterms=3, maxdeg=2)
            if g.is_zero or g.is_const:
                continue
            a = g * random_poly(rng, ["x", "y"], nterms=3, maxdeg=2)
            b = g * random_poly(rng, ["x", "y"], nterms=3, maxdeg=2)
            if a.is_zero or b.is_zero:
                continue
            d = gcd(a, b)
            assert a.exact_div(d) is not None
            assert b.exact_div(d) is not None
            assert d.exact_div(g.monic()) is not None

    def test_three_variable_gcd(self):
        g = P("x*y+z^2+1")
        a = g * P("x-z") ** 2
        b = g * P("y+3")
        assert gcd(a, b) == g.monic()

    def test_lcm(self):
        assert lcm(P("x^2-1"), P("x^2-x")) == P("x^3-x").monic() * QQ(1)


class TestResultant:
    def test_shared_root(self):
        assert resultant(P("x^2-1"), P("x-1"), "x").is_zero

    def test_linear_evaluation(self):
        # res(f, x - a) = f(a) for even-degree monic f; odd degree flips sign
        assert resultant(P("x^2+1"), P("x-2"), "x") == P("5")
        assert resultant(P("x^3-2*x+7"), P("x-3"), "x") == P("-28")

    def test_multivariate_elimination(self):
        r = resultant(P("x^2+y^2-1"), P("x-y"), "x")
        assert r == P("2*y^2-1")

    def test_degree_zero_rejected(self):
        with pytest.raises(PolynomialError):
            resultant(P("y+1"), P("x-1"), "x")

    def test_vanishes_iff_common_factor(self):
        # cross-checked against a brute-force univariate gcd oracle
        rng = random.Random(4)

        def univ(rng, deg):
            c = [QQ(rng.randrange(-4, 5)) for _ in range(deg)] + [QQ(1)]
            p = Poly.zero(("x",))
            for i, ci in enumerate(c):
                p = p + Poly.const(ci, ("x",)) * Poly.variable("x") ** i
            return p

        def naive_gcd_degree(p, q):
            # classic Euclid on coefficient lists, independent of the kernel
            def coeffs(f):
                d = f.degree("x")
                out = [QQ(0)] * (d + 1)
                for exp, c in f.terms.items():
                    out[exp[0]] = c
                return out

            a, b = coeffs(p), coeffs(q)
            while any(b):
                while a and not a[-1]:
                    a.pop()
                while b and not b[-1]:
                    b.pop()
                if len(a) < len(b):
                    a, b = b, a
                    continue
                lead = b[-1]
                shift = len(a) - len(b)
                a = [ai - (a[-1] / lead) * (b[i - shift] if 0 <= i - shift < len(b) else QQ(0))
                     for i, ai in enumerate(a)]
                while a and not a[-1]:
                    a.pop()
                a, b = b, a
            while a and not a[-1]:
                a.pop()
            return len(a) - 1

        for _ in range(30):
            p = univ(rng, rng.randrange(1, 4))
            q = univ(rng, rng.randrange(1, 4))
            if rng.random() < 0.5:
                common = univ(rng, 1)
                p = p * common
                q = q * common
            res = resultant(p, q, "x")
            assert res.is_zero == (naive_gcd_degree(p, q) >= 1)


class TestSquarefree:
    def test_simple(self):
        fac = squarefree(P("(x-1)^2*(x+2)"))
        assert (P("x-1"), 2) in fac and (P("x+2"), 1) in fac

    def test_already_squarefree(self):
        assert squarefree(P("x^2+1")) == [(P("x^2+1"), 1)]

    def test_reassembly_up_to_constant(self):
        rng = random.Random(5)
        for _ in range(12):
            f1 = random_poly(rng, ["x", "y"], nterms=2, maxdeg=2)
            f2 = random_poly(rng, ["x", "y"], nterms=2, maxdeg=2)
            if f1.is_zero or f2.is_zero or f1.is_const or f2.is_const:
                continue
            p = f1 ** 2 * f2
            prod = Poly.const(1)
            for fac, mult in squarefree(p):
                prod = prod * fac ** mult
            ratio = p.exact_div(prod)
            assert ratio is not None and ratio.is_const

    def test_multiplicity_stripped(self):
        # shape of the two-pencils resultants: g2^2 * E * rest
        g2 = P("y")
        e = P("x^3+x*y+2")
        rest = P("x+y+1")
        p = g2 ** 2 * e * rest
        fac = squarefree(p)
        prod = Poly.const(1)
        for f, m in fac:
            prod = prod * f ** m
        assert p.exact_div(prod).is_const
        assert any(f == g2.monic() and m == 2 for f, m in fac)


class TestTrialDivide:
    def test_divisible(self):
        assert trial_divide(P("x^2-1"), P("x-1")) == P("x+1")

    def test_not_divisible(self):
        assert trial_divide(P("x^2+1"), P("x-1")) is None

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            trial_divide(P("x"), Poly.zero(("x",)))
