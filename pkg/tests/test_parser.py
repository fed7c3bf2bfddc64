"""Expression grammar: parsing, printing round-trips, error reporting."""

import pytest

from triweb import parse, parse_numeric, parse_symbolic, ParseError, ratvars
from triweb.kernel import QQ
from triweb.numeric import Sqrt


X, Y = ratvars("x y")


class TestSymbolicMode:
    def test_polynomial_literal(self):
        assert parse("x^2 - 1") == X ** 2 - 1

    def test_reduced_rational(self):
        e = parse("(x+y)/(x-y)")
        assert e.num == (X + Y).num and e.den == (X - Y).num

    def test_jet_tokens_accepted(self):
        e = parse("P_yy*(Q-R)")
        assert set(e.variables) == {"P_yy", "Q", "R"}

    def test_fraction_literal(self):
        assert parse("3/4") == QQ(3, 4)
        assert parse("3/4^2") == QQ(9, 16)  # literal binds before the power
        assert parse("x/4^2") == X / 16

    def test_unary_minus(self):
        assert parse("-x^2") == X ** 2  # grammar: '^' applies to '-x'
        assert parse("-(x^2)") == -(X ** 2)

    def test_roundtrip(self):
        for text in ["x^2 - 1", "(x+y)/(x-y)", "2/3*x*y - 7", "1/(x^2+1)",
                     "P_y*Q - R^3/(x-y)"]:
            e = parse(text)
            assert parse(str(e)) == e

    def test_sqrt_rejected(self):
        with pytest.raises(ParseError):
            parse("sqrt(x)")

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse("x + * y")
        assert err.value.position == 4

    def test_division_by_zero_constant(self):
        with pytest.raises(ParseError):
            parse("1/0")
        with pytest.raises(ParseError):
            parse("x/(y-y)")

    def test_unexpected_character(self):
        with pytest.raises(ParseError):
            parse("x + $")


class TestNumericMode:
    def test_sqrt_allowed(self):
        tree = parse_numeric("sqrt(y^2 - 2*x)")
        assert isinstance(tree, Sqrt)
        assert tree.variables() == {"x", "y"}

    def test_eval(self):
        tree = parse_numeric("x^2 + y")
        assert tree.eval({"x": 2.0, "y": 3.0}) == 7.0

    def test_negative_exponent(self):
        tree = parse_numeric("x^-2")
        assert tree.eval({"x": 2.0}) == 0.25

    def test_mode_dispatch(self):
        assert parse("x+1", mode="numeric").eval({"x": 1.0}) == 2.0
        with pytest.raises(ValueError):
            parse("x", mode="other")
