"""Numeric evaluation and forward-mode jets."""

import math
import random

import pytest

from triweb.numeric import (DomainError, TaylorScalar, UnboundVariable,
                            eval_numeric, taylor_point)
from triweb.parser import parse_numeric


class TestEvalNumeric:
    def test_value_and_gradient(self):
        tree = parse_numeric("x^2 + y")
        value, derivs = eval_numeric(tree, {"x": 2.0, "y": 3.0},
                                     derivatives=[(1, 0), (0, 1)])
        assert value == 7.0
        assert derivs[(1, 0)] == 4.0
        assert derivs[(0, 1)] == 1.0

    def test_sqrt_value(self):
        tree = parse_numeric("sqrt(y^2 - 2*x)")
        value, _ = eval_numeric(tree, {"x": -1.0, "y": 1.0})
        assert value == pytest.approx(math.sqrt(3.0), abs=1e-14)

    def test_negative_sqrt_reports_subexpression(self):
        tree = parse_numeric("1 + sqrt(x - 4)")
        with pytest.raises(DomainError) as err:
            eval_numeric(tree, {"x": 0.0})
        assert "sqrt" in str(err.value)

    def test_unbound_variable(self):
        tree = parse_numeric("x + z")
        with pytest.raises(UnboundVariable):
            eval_numeric(tree, {"x": 1.0})

    def test_parabola_tangent_field_satisfies_euler(self):
        # slope field of the tangent lines of x = y^2/2 is constant on lines:
        # P_x + P*P_y = 0 wherever y^2 > 2x
        P = parse_numeric("1/(y + sqrt(y^2 - 2*x))")
        rng = random.Random(17)
        checked = 0
        while checked < 20:
            # stay away from both the branch locus y^2 = 2x and the pole of P
            x = rng.uniform(-3.0, -1.0)
            y = rng.uniform(1.0, 3.0)
            if y * y - 2 * x < 0.5:
                continue
            value, d = eval_numeric(P, {"x": x, "y": y},
                                    derivatives=[(1, 0), (0, 1)])
            residual = d[(1, 0)] + value * d[(0, 1)]
            assert abs(residual) < 1e-10
            checked += 1


class TestTaylorScalar:
    def test_known_function_jets(self):
        # f = x^2*y at (2, 3): all derivatives explicit
        env = taylor_point(2.0, 3.0, 3)
        f = env["x"] ** 2 * env["y"]
        assert f.value == 12.0
        assert f.derivative(1, 0) == 12.0   # 2xy
        assert f.derivative(0, 1) == 4.0    # x^2
        assert f.derivative(2, 0) == 6.0    # 2y
        assert f.derivative(1, 1) == 4.0    # 2x
        assert f.derivative(2, 1) == 2.0
        assert f.derivative(0, 2) == 0.0

    def test_division_inverts_multiplication(self):
        env = taylor_point(1.5, -0.5, 4)
        a = env["x"] ** 3 + env["y"] + 2.0
        b = env["x"] - env["y"] * env["y"]
        q = a / b
        back = q * b
        for k, c in a.coeffs.items():
            assert back.coeffs.get(k, 0.0) == pytest.approx(c, abs=1e-12)

    def test_sqrt_squares_back(self):
        env = taylor_point(0.5, 2.0, 4)
        a = env["x"] ** 2 + env["y"] ** 2 + 1.0
        s = a.sqrt()
        sq = s * s
        for k, c in a.coeffs.items():
            assert sq.coeffs.get(k, 0.0) == pytest.approx(c, abs=1e-12)

    def test_fourth_order_against_closed_form(self):
        # f = 1/(x+y): d^4 f / dx^2 dy^2 = 24/(x+y)^5
        env = taylor_point(1.0, 2.0, 4)
        f = (env["x"] + env["y"]).reciprocal()
        expected = 24.0 / 3.0 ** 5
        assert f.derivative(2, 2) == pytest.approx(expected, rel=1e-12)

    def test_deriv_jet_consistency(self):
        env = taylor_point(0.7, 1.3, 4)
        f = env["x"] ** 2 * env["y"] + env["y"] ** 3
        fx = f.deriv_jet(0)
        assert fx.value == pytest.approx(f.derivative(1, 0), rel=1e-12)
        assert fx.derivative(0, 1) == pytest.approx(f.derivative(1, 1),
                                                    rel=1e-12)

    def test_branch_point_rejected(self):
        env = taylor_point(0.0, 0.0, 2)
        with pytest.raises(DomainError):
            (env["x"] * env["y"]).sqrt()
