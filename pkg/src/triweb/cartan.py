"""Projective Cartan connections for abstract 3-webs and linearization.

For a non-hexagonal web the coframe is rescaled so that the Blaschke
curvature 2-form becomes the coframe area form; in that normalization the
two structure scalars satisfy the certificate beta_1 - alpha_2 = 1.  A
one-function family of torsion-free gauges is then assembled on the
pattern of the web Darboux derivative; its curvature lives in the affine
subalgebra and is controlled by two scalars K11, K22 whose simultaneous
vanishing for some choice of the gauge function characterizes
linearizability.  The numeric side integrates the gauge along paths and
realizes the linearizing map through the column-sum ray of the developed
frame.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .algebra import SqrtExt, lift_derivation
from .forms import Chart, MatrixForm, OneForm
from .framecalc import DerivationFrame
from .kernel import QQ
from .numeric import TaylorScalar
from .rational import RatExpr, compile_float
from . import web as W


class CartanError(ValueError):
    pass


# -- Blaschke normalization --------------------------------------------------------


@dataclass
class BlaschkeFrame:
    """Rescaled coframe with d(omega_i) = (alpha, beta) * area form.

    Symbolic frames carry SqrtExt scalars over the radicand k; numeric
    frames carry per-point data.  The certificate beta1 - alpha2 = 1 is
    verified at construction (up to the orientation sign in real numeric
    mode when k < 0).
    """

    omega1: tuple
    omega2: tuple
    alpha: object
    beta: object
    k: object
    orientation: int = 1
    coords: tuple = ("u", "v")
    certificate: object = None


def chern_scalars(cf):
    """(e1, e2) with dU1 = e1 U1^U2, dU2 = e2 U1^U2 for a coframe."""
    u, v = cf.coords
    p, q = cf.U1
    m, n = cf.U2
    area = p * n - q * m
    if area.is_zero:
        raise CartanError("degenerate coframe")
    e1 = (q.diff(u) - p.diff(v)) / area
    e2 = (n.diff(u) - m.diff(v)) / area
    return e1, e2


def blaschke_curvature_scalar(cf):
    """k with d(gamma) = k U1^U2 for the Chern form gamma of the coframe."""
    u, v = cf.coords
    e1, e2 = chern_scalars(cf)
    # gamma = e2 U1 - e1 U2
    g = (e2 * cf.U1[0] - e1 * cf.U2[0], e2 * cf.U1[1] - e1 * cf.U2[1])
    dg = g[1].diff(u) - g[0].diff(v)
    area = cf.U1[0] * cf.U2[1] - cf.U1[1] * cf.U2[0]
    return dg / area


def blaschke_normalize(cf):
    """Rescale a coframe by sqrt(k) so the Blaschke 2-form is the area form.

    Exact symbolic path: scalars live in the quadratic extension by k, and
    the certificate beta1 - alpha2 = 1 is checked exactly.
    """
    u, v = cf.coords
    k = blaschke_curvature_scalar(cf)
    if k.is_zero:
        raise CartanError("hexagonal coframe: the Blaschke curvature "
                          "vanishes, no normalization exists")
    s = SqrtExt.root(k)
    D1 = lift_derivation(lambda f: f.diff(u), k)
    D2 = lift_derivation(lambda f: f.diff(v), k)
    w1 = (s * cf.U1[0], s * cf.U1[1])
    w2 = (s * cf.U2[0], s * cf.U2[1])
    area = w1[0] * w2[1] - w1[1] * w2[0]

    def d_coeff(w):
        return D1(w[1]) - D2(w[0])

    alpha = d_coeff(w1) / area
    beta = d_coeff(w2) / area

    def omega_partials(f):
        # df = f2 w1 - f1 w2 in the rescaled coframe
        p, q = w1
        m, n = w2
        det = m * q - p * n
        fx, fy = D1(f), D2(f)
        f2 = (m * fy - n * fx) / det
        f1 = (p * fy - q * fx) / det
        return f1, f2

    beta1 = omega_partials(beta)[0]
    alpha2 = omega_partials(alpha)[1]
    cert = beta1 - alpha2
    if cert != SqrtExt.of(RatExpr.one(), k):
        raise CartanError("normalization certificate beta1 - alpha2 = 1 "
                          "failed (kernel bug)")
    return BlaschkeFrame(omega1=w1, omega2=w2, alpha=alpha, beta=beta, k=k,
                         coords=cf.coords, certificate=cert)


# -- the free-variable gauge family ----------------------------------------------


GAUGE_SYMBOLS = ("alpha", "beta", "N", "N1", "N2",
                 "N11", "N12", "N22", "alpha1", "alpha2", "beta2")


def free_gauge_frame():
    """Derivation frame in the normalized-coframe invariants, all free.

    Subscripts follow the dual convention df = f2 w1 - f1 w2; the
    normalization identity beta1 = 1 + alpha2 is substituted, and the
    mixed second derivative N21 is eliminated through d(dN) = 0:
    N21 = N12 + beta N1 - alpha N2.
    """
    a = {name: RatExpr.var(name) for name in GAUGE_SYMBOLS}
    fr = DerivationFrame(a["alpha"], a["beta"])
    n21 = a["N12"] + a["beta"] * a["N1"] - a["alpha"] * a["N2"]
    fr.set_rule_dual("N", a["N1"], a["N2"])
    fr.set_rule_dual("N1", a["N11"], a["N12"])
    fr.set_rule_dual("N2", n21, a["N22"])
    fr.set_rule_dual("alpha", a["alpha1"], a["alpha2"])
    fr.set_rule_dual("beta", 1 + a["alpha2"], a["beta2"])
    return fr


def gauge_abc():
    """The three gauge coefficients forced by flatness analysis."""
    al, be, N = (RatExpr.var(n) for n in ("alpha", "beta", "N"))
    N1, N2 = RatExpr.var("N1"), RatExpr.var("N2")
    third = QQ(1, 3)
    a = third * N * N + (2 * be + al) * third * N - third * N1 - 2 * third * N2
    b = third * N * N - (be + 2 * al) * third * N + 2 * third * N1 + third * N2
    c = third * N * N + (al - be) * third * N - third * N1 + third * N2
    return a, b, c


def build_gauge(frame=None, a=None, b=None, c=None, invN=None):
    """Assemble the gauge matrix on the Darboux pattern with U_i = w_i / N."""
    fr = frame or free_gauge_frame()
    if a is None:
        a, b, c = gauge_abc()
    if invN is None:
        invN = 1 / RatExpr.var("N")
    ch = Chart(fr.d1, fr.d2, fr.s1, fr.s2, RatExpr.zero)
    zero = RatExpr.zero()
    U1 = OneForm(ch, invN, zero)
    U2 = OneForm(ch, zero, invN)
    U3 = OneForm(ch, -invN, -invN)
    third = RatExpr.const(QQ(1, 3))
    d11 = third * ((1 - 2 * a - c) * U3 - (1 + 2 * a + b) * U2)
    d22 = third * ((1 - 2 * b - a) * U1 - (1 + 2 * b + c) * U3)
    d33 = third * ((1 - 2 * c - b) * U2 - (1 + 2 * c + a) * U1)
    return MatrixForm(ch, [
        [d11, b * U2, c * U3],
        [a * U1, d22, c * U3],
        [a * U1, b * U2, d33],
    ])


@dataclass
class CurvatureReport:
    K11: object
    K22: object
    fullK: list

    def rows_affine(self):
        """Every row equals (K11, K22, -K11-K22)."""
        want = (self.K11, self.K22, -(self.K11 + self.K22))
        for row in self.fullK:
            for got, expect in zip(row, want):
                if not (got - expect).is_zero if isinstance(got, RatExpr) \
                        else abs(got - expect) > 1e-10:
                    return False
        return True


def curvature(gauge=None):
    """K = d(Omega) + Omega ^ Omega of the gauge, reported through K11, K22.

    The matrix of area-form coefficients has three identical rows summing
    to zero across each row; that shape is validated here rather than
    assumed.
    """
    g = gauge or build_gauge()
    mc = g.maurer_cartan()
    K = [[mc[i][j].c for j in range(3)] for i in range(3)]
    K11, K22 = K[0][0], K[0][1]
    for i in range(3):
        if not (K[i][0] - K11).is_zero or not (K[i][1] - K22).is_zero:
            raise CartanError("curvature rows differ (kernel bug)")
        if not (K[i][2] + K11 + K22).is_zero:
            raise CartanError("curvature rows do not sum to zero")
    return CurvatureReport(K11=K11, K22=K22, fullK=K)


def gauge_quotient_invertible():
    """The tangent map into sl(3)/aff(2) induced by the gauge has full rank.

    Computed as the 2x2 determinant of the projected column-sum vectors of
    the two coframe components; nonzero as a rational function.
    """
    g = build_gauge()
    cols = []
    for comp in (0, 1):
        sums = []
        for i in range(3):
            total = RatExpr.zero()
            for j in range(3):
                f = g.rows[i][j]
                total = total + (f.a if comp == 0 else f.b)
            sums.append(total)
        cols.append((sums[0] - sums[2], sums[1] - sums[2]))
    det = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]
    return det


# -- numeric evaluation of the flatness residuals -----------------------------------


def _web_scalars_at(web, x, y, order=6):
    """Taylor-jet values of a, b, c, k and the coframe at a point."""
    values = W.numeric_jet_values(web, x, y, order=2, extra_orders=order - 2)
    a, b, c = (W._ev(f, values) for f in W.abc_formulas())
    U = [tuple(W._ev(cf, values) for cf in pair)
         for pair in W.coframe_formulas()]
    return a, b, c, U


def _dual_partials(f, w1, w2):
    p, q = w1
    m, n = w2
    det = m * q - p * n
    fx = f.deriv_jet(0)
    fy = f.deriv_jet(1)
    f2 = (m * fy - n * fx) / det
    f1 = (p * fy - q * fx) / det
    return f1, f2


def numeric_blaschke(web, x, y, order=6):
    """Blaschke-normalized data at a point of a numeric (or symbolic) web."""
    a, b, c, U = _web_scalars_at(web, x, y, order)
    k = a + b + c
    orientation = 1
    kv = k.value
    if abs(kv) < 1e-12:
        raise CartanError("hexagonal point: k = 0")
    radicand = k
    if kv < 0:
        radicand = -k
        orientation = -1
    s = radicand.sqrt()
    w1 = (s * U[0][0], s * U[0][1])
    w2 = (s * U[1][0], s * U[1][1])
    area = w1[0] * w2[1] - w1[1] * w2[0]
    alpha = (w1[1].deriv_jet(0) - w1[0].deriv_jet(1)) / area
    beta = (w2[1].deriv_jet(0) - w2[0].deriv_jet(1)) / area
    beta1 = _dual_partials(beta, w1, w2)[0]
    alpha2 = _dual_partials(alpha, w1, w2)[1]
    cert = beta1 - alpha2
    return BlaschkeFrame(omega1=w1, omega2=w2, alpha=alpha, beta=beta,
                         k=k, orientation=orientation, coords=("x", "y"),
                         certificate=cert)


def flatness_residuals(web, N_expr, points, order=6):
    """K11, K22 of the gauge built with the supplied nonvanishing N.

    N_expr is a numeric expression tree in (x, y); entries are evaluated
    per point by substituting jet values of all twelve gauge symbols into
    the symbolic curvature scalars.
    """
    rep = curvature()
    out = []
    for (x, y) in points:
        bf = numeric_blaschke(web, x, y, order)
        env = {"x": TaylorScalar.seed(0, x, order - 2),
               "y": TaylorScalar.seed(1, y, order - 2)}
        Nj = N_expr.eval(env)
        if not isinstance(Nj, TaylorScalar):
            Nj = TaylorScalar.const(Nj, order - 2)
        vals = _gauge_symbol_values(bf, Nj)
        k11 = rep.K11.eval(vals, convert=float)
        k22 = rep.K22.eval(vals, convert=float)
        out.append({"point": (x, y), "K11": k11, "K22": k22})
    return out


def _gauge_symbol_values(bf, Nj):
    w1, w2 = bf.omega1, bf.omega2
    N1, N2 = _dual_partials(Nj, w1, w2)
    N11, N12 = _dual_partials(N1, w1, w2)
    N21, N22 = _dual_partials(N2, w1, w2)
    alpha1, alpha2 = _dual_partials(bf.alpha, w1, w2)
    beta1, beta2 = _dual_partials(bf.beta, w1, w2)
    vals = {"alpha": bf.alpha, "beta": bf.beta, "N": Nj,
            "N1": N1, "N2": N2, "N11": N11, "N12": N12,
            "N21": N21, "N22": N22,
            "alpha1": alpha1, "alpha2": alpha2, "beta2": beta2}
    return {k: (v.value if isinstance(v, TaylorScalar) else float(v))
            for k, v in vals.items()}


class OwnNormalization:
    """The gauge function sqrt(|k|) that reproduces the web's own coframe.

    Duck-types the numeric expression protocol (eval over a jet
    environment), so it can be passed wherever an N expression is expected.
    The induced gauge coincides with the web Darboux derivative, hence is
    flat for a genuinely linear web.
    """

    def __init__(self, web, slack=4):
        self.web = web
        self.slack = slack

    def eval(self, env):
        x = env["x"]
        y = env["y"]
        if not isinstance(x, TaylorScalar):
            x = TaylorScalar.const(float(x), 0)
            y = TaylorScalar.const(float(y), 0)
        order = x.order
        a, b, c, _ = _web_scalars_at(self.web, x.value, y.value,
                                     order + self.slack)
        k = a + b + c
        s = (k if k.value > 0 else -k).sqrt()
        return s.truncated(order)


def flatness_grid_csv(rows):
    lines = ["x,y,K11,K22"]
    for r in rows:
        lines.append(f"{r['point'][0]:.17g},{r['point'][1]:.17g},"
                     f"{r['K11']:.17g},{r['K22']:.17g}")
    return "\n".join(lines) + "\n"


# -- development and linearization ----------------------------------------------------


@lru_cache(maxsize=1)
def _compiled_omega_entries():
    """The 18 gauge-entry coefficients compiled over the flat jet alphabet."""
    closed = W.omega_closed_formula()
    names = ["x", "y"] + [W.jet_name(b, k) for b in ("P", "Q", "R")
                          for k in range(3)]
    fns = []
    for i in range(3):
        for j in range(3):
            f = closed.rows[i][j]
            fns.append((compile_float(f.a, names), compile_float(f.b, names)))
    return names, fns


def web_omega_provider(web):
    """(x, y) -> (Mx, My): the two 3x3 component matrices of the gauge."""
    names, fns = _compiled_omega_entries()
    if web.mode == "symbolic":
        jets = W.symbolic_jet_values(web, order=2)
        jet_fns = [compile_float(jets[n], ("x", "y")) for n in names[2:]]

        def flat_env(x, y):
            return [x, y] + [fn(x, y) for fn in jet_fns]
    else:
        def flat_env(x, y):
            values = W.numeric_jet_values(web, x, y, order=2, extra_orders=0)
            return [x, y] + [values[n].value for n in names[2:]]

    def provider(x, y):
        env = flat_env(x, y)
        Mx = np.zeros((3, 3))
        My = np.zeros((3, 3))
        for idx, (fa, fb) in enumerate(fns):
            i, j = divmod(idx, 3)
            Mx[i, j] = fa(*env)
            My[i, j] = fb(*env)
        return Mx, My

    return provider


def develop_path(provider, path, steps_per_segment=64, renormalize=True):
    """Integrate dF = F * Omega along a polyline with classical RK4.

    The generator is trace-free, so det F = 1 is preserved; it is
    re-imposed after every step to stop drift.
    """
    F = np.eye(3)
    trail = [F.copy()]
    for (x0, y0), (x1, y1) in zip(path[:-1], path[1:]):
        vx, vy = x1 - x0, y1 - y0
        n = steps_per_segment
        h = 1.0 / n
        for s in range(n):
            t = s * h

            def rhs(Fm, tt):
                x = x0 + vx * tt
                y = y0 + vy * tt
                Mx, My = provider(x, y)
                return Fm @ (Mx * vx + My * vy)

            k1 = rhs(F, t)
            k2 = rhs(F + 0.5 * h * k1, t + 0.5 * h)
            k3 = rhs(F + 0.5 * h * k2, t + 0.5 * h)
            k4 = rhs(F + h * k3, t + h)
            F = F + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if renormalize:
                d = np.linalg.det(F)
                F = F / math.copysign(abs(d) ** (1.0 / 3.0), d)
        trail.append(F.copy())
    return F, trail


def develop(web_or_provider, base, target, steps=96, tol=1e-8,
            max_refinements=5):
    """Endpoint frame of the straight path base -> target, step-doubled
    until two resolutions agree then Richardson-safe."""
    provider = web_or_provider if callable(web_or_provider) \
        else web_omega_provider(web_or_provider)
    path = [tuple(map(float, base)), tuple(map(float, target))]
    F_prev, _ = develop_path(provider, path, steps)
    for _ in range(max_refinements):
        steps *= 2
        F_next, _ = develop_path(provider, path, steps)
        if np.max(np.abs(F_next - F_prev)) < tol:
            return F_next
        F_prev = F_next
    return F_prev


def linearize(web, base, samples, steps=96):
    """Map sample points by the column-sum ray of the developed frame.

    Points on a common web leaf land on a common line of the target
    plane; the base point goes to the distinguished ray (1 : 1 : 1).
    """
    provider = web_omega_provider(web)
    ones = np.ones(3)
    out = []
    for p in samples:
        F = develop(provider, base, p, steps=steps)
        zeta = F @ ones  # sum of the frame columns
        out.append(zeta / np.linalg.norm(zeta))
    return out


def collinearity_residual(points):
    """Scaled determinant of three homogeneous image points (0 = collinear)."""
    if len(points) < 3:
        return 0.0
    worst = 0.0
    for i in range(len(points) - 2):
        m = np.stack([points[i], points[i + 1], points[i + 2]])
        worst = max(worst, abs(np.linalg.det(m)))
    return worst


def cross_ratio(points):
    """Cross ratio of four (nearly) collinear homogeneous points.

    The points are projected onto their best-fit plane through the origin,
    giving homogeneous coordinates on a projective line; the cross ratio
    is the usual determinant expression there.
    """
    m = np.stack(points[:4])
    _, _, vt = np.linalg.svd(m)
    basis = vt[:2]
    h = [basis @ p for p in points[:4]]

    def det2(u, v):
        return u[0] * v[1] - u[1] * v[0]

    p1, p2, p3, p4 = h
    return (det2(p1, p3) * det2(p2, p4)) / (det2(p1, p4) * det2(p2, p3))


def matrix_path_json(trail):
    return json.dumps([[[float(v) for v in row] for row in m]
                       for m in trail])
