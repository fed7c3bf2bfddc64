"""Projective invariants of a planar linear 3-web given by slope fields.

A linear 3-web is described by three pairwise distinct inclination fields
P, Q, R of its straight leaves; each satisfies the rectilinearity equation
B_x + B*B_y = 0.  This module carries the invariant machinery: focal
points, the normalized frame matrix and its Darboux derivative, the
coframe U1, U2, U3 (summing to zero), and the basic invariants a, b, c
whose vanishing patterns classify pencils and conic-tangent foliations.

All formulas are built once over the jet alphabet and then evaluated in
whatever scalar world is asked for: generic jets (identity), exact rational
functions of (x, y), exact values at a rational point, or numeric Taylor
jets for webs involving square roots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .forms import MatrixForm, OneForm, coordinate_chart
from .jets import jet_name, jet_var, total_dx, total_dy
from .kernel import QQ
from .numeric import NumExpr, TaylorScalar
from .parser import parse_numeric, parse_symbolic
from .rational import RatExpr


class WebError(ValueError):
    pass


class DegenerateWeb(WebError):
    """The web is regular/degenerate where it was evaluated."""


NEAR_REGULAR_RTOL = 1e-9


@dataclass(frozen=True)
class WebDef:
    """Three inclination fields; symbolic (RatExpr) or numeric (NumExpr)."""

    P: object
    Q: object
    R: object
    mode: str = "symbolic"

    def __post_init__(self):
        if self.mode not in ("symbolic", "numeric"):
            raise WebError(f"unknown mode {self.mode!r}")
        want = RatExpr if self.mode == "symbolic" else NumExpr
        for f in (self.P, self.Q, self.R):
            if not isinstance(f, want):
                raise WebError(f"{self.mode} web needs {want.__name__} fields")
        if self.mode == "symbolic":
            if self.P == self.Q or self.Q == self.R or self.P == self.R:
                raise WebError("the three direction fields must be distinct")

    @staticmethod
    def from_strings(P, Q, R, mode="symbolic"):
        load = parse_symbolic if mode == "symbolic" else parse_numeric
        return WebDef(load(P), load(Q), load(R), mode)

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        return WebDef.from_strings(data["P"], data["Q"], data["R"],
                                   data.get("mode", "symbolic"))

    def to_json(self):
        return json.dumps({"mode": self.mode, "P": str(self.P),
                           "Q": str(self.Q), "R": str(self.R)})

    def fields(self):
        return {"P": self.P, "Q": self.Q, "R": self.R}

    def euler_residuals(self):
        """Exact rectilinearity residuals B_x + B*B_y (symbolic mode)."""
        if self.mode != "symbolic":
            raise WebError("euler_residuals needs a symbolic web")
        out = {}
        for name, f in self.fields().items():
            out[name] = f.diff("x") + f * f.diff("y")
        return out

    def is_linear(self):
        return all(r.is_zero for r in self.euler_residuals().values())


# -- formulas over the jet alphabet ----------------------------------------------


@lru_cache(maxsize=None)
def _sym(name):
    return RatExpr.var(name)


def _jets(base, order):
    return jet_var(base, order)


@lru_cache(maxsize=1)
def delta_formula():
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    Py, Qy, Ry = _jets("P", 1), _jets("Q", 1), _jets("R", 1)
    return Py * (Q - R) + Qy * (R - P) + Ry * (P - Q)


@lru_cache(maxsize=1)
def mu_formula():
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    d = delta_formula()
    return -((P - Q) * (Q - R) * (R - P)) / (d * d)


@lru_cache(maxsize=1)
def z_formulas():
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    Py, Qy, Ry = _jets("P", 1), _jets("Q", 1), _jets("R", 1)
    d = delta_formula()
    return (Py * (Q - R) / d, Qy * (R - P) / d, Ry * (P - Q) / d)


@lru_cache(maxsize=1)
def abc_formulas():
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    d2 = delta_formula() ** 2
    a = (P - Q) * (P - R) * (R - Q) * _jets("P", 2) / d2
    b = (Q - R) * (Q - P) * (P - R) * _jets("Q", 2) / d2
    c = (R - P) * (R - Q) * (Q - P) * _jets("R", 2) / d2
    return a, b, c


@lru_cache(maxsize=1)
def coframe_formulas():
    """U1, U2, U3 as (dx, dy) coefficient pairs; they sum to zero."""
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    d = delta_formula()
    out = []
    for B, den in ((P, (P - R) * (P - Q)),
                   (Q, (Q - P) * (Q - R)),
                   (R, (R - Q) * (R - P))):
        scale = -d / den
        out.append((-scale * B, scale))  # coefficient of dx, of dy
    return tuple(out)


@lru_cache(maxsize=1)
def frame_matrix_formula():
    """The frame matrix with the cube-root normalization factor removed."""
    x, y = _sym("x"), _sym("y")
    P, Q, R = _jets("P", 0), _jets("Q", 0), _jets("R", 0)
    Py, Qy, Ry = _jets("P", 1), _jets("Q", 1), _jets("R", 1)
    z1, z2, z3 = z_formulas()
    return [
        [z1 * (x - 1 / Py), z2 * (x - 1 / Qy), z3 * (x - 1 / Ry)],
        [z1 * (y - P / Py), z2 * (y - Q / Qy), z3 * (y - R / Ry)],
        [z1, z2, z3],
    ]


def focal_formulas():
    """Homogeneous coordinates of the three focal points."""
    x, y = _sym("x"), _sym("y")
    out = []
    for base in ("P", "Q", "R"):
        B = _jets(base, 0)
        By = _jets(base, 1)
        out.append((x * By - 1, y * By - B, By))
    return out


def jet_chart():
    return coordinate_chart(total_dx, total_dy, RatExpr.zero)


@lru_cache(maxsize=1)
def omega_closed_formula():
    """The Darboux derivative in closed form (trace-free by U1+U2+U3=0)."""
    a, b, c = abc_formulas()
    (u1x, u1y), (u2x, u2y), (u3x, u3y) = coframe_formulas()
    ch = jet_chart()
    U1 = OneForm(ch, u1x, u1y)
    U2 = OneForm(ch, u2x, u2y)
    U3 = OneForm(ch, u3x, u3y)
    third = RatExpr.const(QQ(1, 3))
    d11 = third * ((1 - 2 * a - c) * U3 - (1 + 2 * a + b) * U2)
    d22 = third * ((1 - 2 * b - a) * U1 - (1 + 2 * b + c) * U3)
    d33 = third * ((1 - 2 * c - b) * U2 - (1 + 2 * c + a) * U1)
    return MatrixForm(ch, [
        [d11, b * U2, c * U3],
        [a * U1, d22, c * U3],
        [a * U1, b * U2, d33],
    ])


@lru_cache(maxsize=1)
def omega_from_frame_formula():
    """F^-1 dF with the cube root eliminated: Fhat^-1 dFhat - (dmu/3mu) Id."""
    F = frame_matrix_formula()
    mu = mu_formula()
    ch = jet_chart()
    # adjugate / det inverse; det(Fhat) = mu
    adj = [[None] * 3 for _ in range(3)]
    idx = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    for i in range(3):
        for j in range(3):
            r1, r2 = [r for r in range(3) if r != j]
            c1, c2 = [c for c in range(3) if c != i]
            minor = F[r1][c1] * F[r2][c2] - F[r1][c2] * F[r2][c1]
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    dF = [[OneForm(ch, total_dx(F[i][j]), total_dy(F[i][j]))
           for j in range(3)] for i in range(3)]
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = OneForm(ch, RatExpr.zero(), RatExpr.zero())
            for k in range(3):
                acc = acc + (adj[i][k] / mu) * dF[k][j]
            row.append(acc)
        rows.append(row)
    dmu_over = OneForm(ch, total_dx(mu) / (3 * mu), total_dy(mu) / (3 * mu))
    for i in range(3):
        rows[i][i] = rows[i][i] - dmu_over
    return MatrixForm(ch, rows)


# -- evaluation worlds -------------------------------------------------------------


def formal_jet_values(order=4):
    values = {"x": _sym("x"), "y": _sym("y")}
    for base in ("P", "Q", "R"):
        for k in range(order + 1):
            values[jet_name(base, k)] = jet_var(base, k)
    return values


def symbolic_jet_values(web, order=4):
    if web.mode != "symbolic":
        raise WebError("symbolic jets need a symbolic web")
    values = {"x": _sym("x"), "y": _sym("y")}
    for base, f in web.fields().items():
        d = f
        for k in range(order + 1):
            values[jet_name(base, k)] = d
            d = d.diff("y")
    return values


def numeric_jet_values(web, x, y, order=4, extra_orders=0):
    """Taylor-jet environment around (x, y) with enough slack to take
    a few more coordinate derivatives downstream."""
    taylor_order = order + extra_orders
    env = {"x": TaylorScalar.seed(0, x, taylor_order),
           "y": TaylorScalar.seed(1, y, taylor_order)}
    values = dict(env)
    for base, tree in (("P", web.P), ("Q", web.Q), ("R", web.R)):
        jet = tree.eval(env)
        if not isinstance(jet, TaylorScalar):
            jet = TaylorScalar.const(jet, taylor_order)
        d = jet
        for k in range(order + 1):
            values[jet_name(base, k)] = d
            d = d.deriv_jet(1)
    return values


def _ev(formula, values):
    if values is None:
        return formula
    convert = None
    sample = values.get("x")
    if isinstance(sample, TaylorScalar):
        convert = float
    return formula.eval(values, convert=convert)


def evaluate_at_point(expr, at):
    """Exact evaluation of an (x, y) rational expression at a rational point."""
    return expr.eval({"x": QQ(at[0]), "y": QQ(at[1])})


# -- operations ----------------------------------------------------------------------


@dataclass
class WebJetRecord:
    point: object
    jets: dict
    delta: object
    mu: object
    z: tuple


@dataclass
class InvariantRecord:
    a: object
    b: object
    c: object
    k: object
    U1: tuple
    U2: tuple
    U3: tuple
    gamma: tuple
    point: object = None
    mode: str = "symbolic"

    def abc(self):
        return (self.a, self.b, self.c)

    def to_json(self):
        def enc(v):
            if isinstance(v, float):
                return v
            return str(v)

        return json.dumps({
            "point": None if self.point is None else [enc(QQ(self.point[0])) if self.mode == "symbolic" else float(self.point[0]),
                                                      enc(QQ(self.point[1])) if self.mode == "symbolic" else float(self.point[1])],
            "a": enc(self.a), "b": enc(self.b), "c": enc(self.c),
            "k": enc(self.k),
            "U": [[enc(self.U1[0]), enc(self.U1[1])],
                  [enc(self.U2[0]), enc(self.U2[1])],
                  [enc(self.U3[0]), enc(self.U3[1])]],
        }, indent=2)


def _jet_values_for(web, at, order=2, extra_orders=0):
    if web is None:
        return formal_jet_values(order)
    if web.mode == "symbolic":
        values = symbolic_jet_values(web, order)
        if at is not None:
            values = {k: evaluate_at_point(v, at) if isinstance(v, RatExpr)
                      else v for k, v in values.items()}
            values["x"] = QQ(at[0])
            values["y"] = QQ(at[1])
        return values
    if at is None:
        raise WebError("numeric webs need an evaluation point")
    return numeric_jet_values(web, float(at[0]), float(at[1]), order,
                              extra_orders)


def _check_delta(delta_value, mode):
    if mode == "numeric":
        scale = abs(delta_value) + 1.0
        if abs(delta_value) < NEAR_REGULAR_RTOL * scale:
            raise DegenerateWeb("near-regular web: focal points almost "
                                "collinear (delta ~ 0)")
    else:
        if isinstance(delta_value, RatExpr):
            if delta_value.is_zero:
                raise DegenerateWeb("regular web: delta vanishes identically")
        elif not delta_value:
            raise DegenerateWeb("regular web: delta vanishes at the point")


def web_jet_record(web, at=None):
    values = _jet_values_for(web, at, order=1)
    mode = "numeric" if (web is not None and web.mode == "numeric") \
        else "symbolic"
    d = _ev(delta_formula(), values)
    dv = d.value if isinstance(d, TaylorScalar) else d
    _check_delta(dv, mode)
    mu = _ev(mu_formula(), values)
    z = tuple(_ev(f, values) for f in z_formulas())
    return WebJetRecord(point=at, jets=values, delta=d, mu=mu, z=z)


def focal_points(web, at):
    """Homogeneous coordinates of the three focal points at a point.

    A vanishing slope derivative puts the focal point on the line at
    infinity; the homogeneous triple then has last coordinate zero and
    carries the direction.
    """
    values = _jet_values_for(web, at, order=1)
    out = []
    for fx, fy, fw in focal_formulas():
        triple = (_ev(fx, values), _ev(fy, values), _ev(fw, values))
        if isinstance(triple[0], TaylorScalar):
            triple = tuple(t.value for t in triple)
        if triple[2]:
            triple = (triple[0] / triple[2], triple[1] / triple[2],
                      triple[2] / triple[2])
        out.append(triple)
    return out


def invariants(web, at=None):
    """The invariant record (a, b, c), coframe, Chern form and curvature k."""
    mode = "formal" if web is None else web.mode
    values = _jet_values_for(web, at, order=2)
    d = _ev(delta_formula(), values)
    dv = d.value if isinstance(d, TaylorScalar) else d
    _check_delta(dv, "numeric" if mode == "numeric" else "symbolic")
    a, b, c = (_ev(f, values) for f in abc_formulas())
    U = [tuple(_ev(cf, values) for cf in pair) for pair in coframe_formulas()]
    gamma = (a * U[0][0] + b * U[1][0] + c * U[2][0],
             a * U[0][1] + b * U[1][1] + c * U[2][1])
    if mode == "numeric":
        a, b, c = a.value, b.value, c.value
        U = [tuple(x.value for x in pair) for pair in U]
        gamma = tuple(x.value for x in gamma)
    record = InvariantRecord(a=a, b=b, c=c, k=a + b + c,
                             U1=U[0], U2=U[1], U3=U[2], gamma=gamma,
                             point=at, mode=mode)
    return record


def omega(web=None, closed_form=True):
    """The Darboux-derivative gauge form over generic jets or a symbolic web.

    With closed_form=False the matrix is rebuilt from the frame matrix as
    Fhat^-1 dFhat - (dmu/3mu) Id; both routes agree identically.
    """
    base = omega_closed_formula() if closed_form else omega_from_frame_formula()
    if web is None:
        return base
    if web.mode != "symbolic":
        raise WebError("matrix gauge forms are symbolic-only")
    values = symbolic_jet_values(web, order=3)
    ch = coordinate_chart(lambda f: f.diff("x"), lambda f: f.diff("y"),
                          RatExpr.zero)
    rows = [[OneForm(ch, base.rows[i][j].a.eval(values),
                     base.rows[i][j].b.eval(values))
             for j in range(3)] for i in range(3)]
    return MatrixForm(ch, rows)


def coframe_partials(f, U1, U2):
    """Solve df = f2*U1 - f1*U2 for (f1, f2, f3) with f3 = -f1 - f2.

    f is a scalar in the same world as the U coefficients; d is the chart
    differential of that world (total derivatives for jet scalars).
    """
    p, q = U1
    m, n = U2
    if isinstance(f, RatExpr):
        fx = total_dx(f) if _is_jet_scalar(f) else f.diff("x")
        fy = total_dy(f) if _is_jet_scalar(f) else f.diff("y")
    else:
        fx = f.deriv_jet(0)
        fy = f.deriv_jet(1)
    det = m * q - p * n
    f2 = (m * fy - n * fx) / det
    f1 = (p * fy - q * fx) / det
    return f1, f2, -f1 - f2


def _is_jet_scalar(f):
    from .jets import split_jet_name
    return any(split_jet_name(v) for v in f.variables)


def structure_residuals():
    """All structure-equation residuals over generic jets.

    Returns a dict mapping residual names to expressions that must vanish:
    the three dU equations, the three first-derivative relations for a, b,
    c, the Chern-form curvature identity, and the nine entries of the
    Maurer-Cartan residual of the closed-form gauge matrix.
    """
    ch = jet_chart()
    a, b, c = abc_formulas()
    pairs = coframe_formulas()
    U1, U2, U3 = (OneForm(ch, px, py) for px, py in pairs)
    out = {}
    out["dU1"] = (U1.d() - (c - b) * U2.wedge(U3)).c
    out["dU2"] = (U2.d() - (a - c) * U3.wedge(U1)).c
    out["dU3"] = (U3.d() - (b - a) * U1.wedge(U2)).c
    a1, _, _ = coframe_partials(a, pairs[0], pairs[1])
    out["a1"] = a1 - a * (1 + 2 * (b - c))
    _, b2, _ = coframe_partials(b, pairs[0], pairs[1])
    out["b2"] = b2 - b * (1 + 2 * (c - a))
    _, _, c3 = coframe_partials(c, pairs[0], pairs[1])
    out["c3"] = c3 - c * (1 + 2 * (a - b))
    gamma = a * U1 + b * U2 + c * U3
    out["dgamma"] = (gamma.d() - (a + b + c) * U1.wedge(U2)).c
    mc = omega_closed_formula().maurer_cartan()
    for i in range(3):
        for j in range(3):
            out[f"MC[{i}{j}]"] = mc[i][j].c
    return out


def frame_identities():
    """det(Fhat) = mu, sum z_i = 1, and both gauge constructions agree."""
    F = frame_matrix_formula()
    det = (F[0][0] * (F[1][1] * F[2][2] - F[1][2] * F[2][1])
           - F[0][1] * (F[1][0] * F[2][2] - F[1][2] * F[2][0])
           + F[0][2] * (F[1][0] * F[2][1] - F[1][1] * F[2][0]))
    out = {"det_minus_mu": det - mu_formula()}
    z1, z2, z3 = z_formulas()
    out["z_sum_minus_1"] = z1 + z2 + z3 - 1
    closed = omega_closed_formula()
    framed = omega_from_frame_formula()
    for i in range(3):
        for j in range(3):
            gap = closed.rows[i][j] - framed.rows[i][j]
            out[f"omega_gap[{i}{j}].dx"] = gap.a
            out[f"omega_gap[{i}{j}].dy"] = gap.b
    om = closed.rows
    u1 = om[1][1] - om[2][2] + om[1][2] - om[2][1]
    pairs = coframe_formulas()
    out["U1_from_omega.dx"] = u1.a - pairs[0][0]
    out["U1_from_omega.dy"] = u1.b - pairs[0][1]
    out["omega21_minus_aU1.dx"] = om[1][0].a - abc_formulas()[0] * pairs[0][0]
    out["omega21_minus_aU1.dy"] = om[1][0].b - abc_formulas()[0] * pairs[0][1]
    out["trace.dx"] = closed.trace().a
    out["trace.dy"] = closed.trace().b
    return out


def s3_transposition_12(expr):
    """Relabel foliations 1 <-> 2 in a jet expression (swap P and Q jets)."""
    mapping = {}
    for v in expr.variables:
        if v.startswith("P"):
            mapping[v] = RatExpr.var("Q" + v[1:])
        elif v.startswith("Q"):
            mapping[v] = RatExpr.var("P" + v[1:])
    return expr.subs(mapping)


def projective_transform(web, matrix):
    """Transport a symbolic web by an invertible 3x3 rational matrix.

    The matrix acts on the projective plane by [x : y : 1] -> M [x : y : 1];
    the returned web is expressed in the target coordinates.
    """
    if web.mode != "symbolic":
        raise WebError("projective transport is symbolic-only")
    M = [[QQ(matrix[i][j]) for j in range(3)] for i in range(3)]
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
           - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    if not det:
        raise WebError("projective matrix must be invertible")
    x, y = _sym("x"), _sym("y")
    one = RatExpr.one()

    def apply(mat, u, v):
        den = mat[2][0] * u + mat[2][1] * v + mat[2][2] * one
        return ((mat[0][0] * u + mat[0][1] * v + mat[0][2] * one) / den,
                (mat[1][0] * u + mat[1][1] * v + mat[1][2] * one) / den)

    # rational inverse through the adjugate
    adj = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    inv_x, inv_y = apply(adj, x, y)
    fx, fy = apply(M, x, y)

    def push(slope):
        num = fy.diff("x") + fy.diff("y") * slope
        den = fx.diff("x") + fx.diff("y") * slope
        image = num / den
        return image.subs({"x": inv_x, "y": inv_y})

    return WebDef(push(web.P), push(web.Q), push(web.R), "symbolic")


def point_image(matrix, at):
    M = [[QQ(matrix[i][j]) for j in range(3)] for i in range(3)]
    u, v = QQ(at[0]), QQ(at[1])
    den = M[2][0] * u + M[2][1] * v + M[2][2]
    return ((M[0][0] * u + M[0][1] * v + M[0][2]) / den,
            (M[1][0] * u + M[1][1] * v + M[1][2]) / den)
